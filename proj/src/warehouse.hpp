#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mdp.hpp"
#include "templates.hpp"

namespace cexplain {

// Grid-world mission generator. A cell is a state; moves head toward the
// pick-up and delivery areas, slipping sideways inside the magnetic field.
// The human zone is the critical region a plan must avoid.
struct GridLayout {
    int n = 10;
    int start_row = 0;
    int start_col = 0;
    double slip = 0.1;
    enum class SlipMap { Paired, RotateCw };
    SlipMap slip_map = SlipMap::Paired;
    // zone name -> cells (row, col); sorted row-major, no duplicates
    std::map<std::string, std::vector<std::pair<int, int>>> zones;
};

// The five zone names the generator understands, in labelling order.
extern const std::vector<std::string> kZoneNames;

// Banded standard layout: charging strip on the west edge, pick-up in the
// south-west, delivery in the south-east, a magnetic corridor row between
// them with the human zone right below it. Start at the north-west corner.
GridLayout default_layout(int n);

// Line-oriented layout file: `n <int>`, `start <row> <col>`,
// `slip <double>`, `slip-map <paired|rotate-cw>`, and repeatable
// `zone <name> <r0> <c0> <r1> <c1>` inclusive rectangles. '#' comments.
// Throws std::runtime_error naming the offending line.
GridLayout parse_layout(const std::string& text);

struct WarehouseInstance {
    Mdp mdp;
    Vocabulary vocab;
    int target_prop = -1;      // "in-human-zone"
    int terminal_action = -1;  // "stop"
};

// Expands a layout into the grid MDP, its labelling and the matching
// vocabulary. Every cell gets the moves that reduce the distance to the
// pick-up or delivery bounding box, plus stop inside those areas; human-zone
// cells only stop. Moves are deterministic except in the magnetic field,
// where the configured slip probability diverts them sideways; leaving the
// grid keeps the robot in place. Labels cover zone membership and direct
// adjacency from each side. Throws std::invalid_argument on a layout
// without human-zone cells or with an out-of-range start.
WarehouseInstance generate_warehouse(const GridLayout& layout);

}  // namespace cexplain
