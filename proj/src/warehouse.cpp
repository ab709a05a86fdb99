#include "warehouse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cexplain {

const std::vector<std::string> kZoneNames = {
    "charging-station", "pick-up-area", "delivery-area", "human-zone",
    "magnetic-field"};

namespace {

enum Action { kEast = 0, kSouth = 1, kWest = 2, kNorth = 3, kStop = 4 };

constexpr int kRowStep[4] = {0, 1, 0, -1};
constexpr int kColStep[4] = {1, 0, -1, 0};

int slip_partner(int a, GridLayout::SlipMap map) {
    if (map == GridLayout::SlipMap::Paired) {
        switch (a) {
            case kEast: return kSouth;
            case kSouth: return kEast;
            case kWest: return kNorth;
            case kNorth: return kWest;
        }
    } else {
        switch (a) {  // quarter turn clockwise
            case kEast: return kSouth;
            case kSouth: return kWest;
            case kWest: return kNorth;
            case kNorth: return kEast;
        }
    }
    return a;
}

std::string zone_phrase(const std::string& zone) {
    std::string out = zone;
    std::replace(out.begin(), out.end(), '-', ' ');
    return out;
}

}  // namespace

GridLayout default_layout(int n) {
    if (n < 4) throw std::invalid_argument("grid side must be at least 4");
    GridLayout lay;
    lay.n = n;
    auto band = [n](double flo, double fhi) {
        const int lo = (int)(flo * n);
        const int hi = std::max(lo + 1, (int)(fhi * n));
        return std::pair<int, int>(lo, std::min(hi, n));
    };
    const int rc = (int)(0.8 * n);  // corridor row
    auto& zones = lay.zones;
    {
        const auto [c0, c1] = band(0.0, 0.1);
        for (int r = 0; r < rc; ++r)
            for (int c = c0; c < c1; ++c)
                zones["charging-station"].push_back({r, c});
    }
    {
        const auto [c0, c1] = band(0.0, 0.3);
        for (int r = rc; r < n; ++r)
            for (int c = c0; c < c1; ++c)
                zones["pick-up-area"].push_back({r, c});
    }
    {
        const auto [c0, c1] = band(0.3, 0.6);
        for (int c = c0; c < c1; ++c)
            zones["magnetic-field"].push_back({rc, c});
        const int r0 = std::min(n - 1, rc + 1);
        const int r1 = std::min(n, rc + 1 + std::max(1, n / 10));
        for (int r = r0; r < r1; ++r)
            for (int c = c0; c < c1; ++c)
                zones["human-zone"].push_back({r, c});
    }
    {
        const auto [r0, r1] = band(0.8, 1.0);
        const auto [c0, c1] = band(0.8, 1.0);
        for (int r = r0; r < r1; ++r)
            for (int c = c0; c < c1; ++c)
                zones["delivery-area"].push_back({r, c});
    }
    return lay;
}

GridLayout parse_layout(const std::string& text) {
    GridLayout lay;
    lay.zones.clear();
    bool have_n = false;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("line " + std::to_string(lineno) + ": " +
                                 what);
    };
    while (std::getline(in, raw)) {
        ++lineno;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream line(raw);
        std::string key;
        if (!(line >> key)) continue;
        if (key == "n") {
            if (!(line >> lay.n) || lay.n < 2) fail("n needs an integer >= 2");
            have_n = true;
        } else if (key == "start") {
            if (!(line >> lay.start_row >> lay.start_col))
                fail("start needs a row and a column");
        } else if (key == "slip") {
            if (!(line >> lay.slip) || lay.slip < 0.0 || lay.slip >= 1.0)
                fail("slip needs a probability below 1");
        } else if (key == "slip-map") {
            std::string v;
            line >> v;
            if (v == "paired")
                lay.slip_map = GridLayout::SlipMap::Paired;
            else if (v == "rotate-cw")
                lay.slip_map = GridLayout::SlipMap::RotateCw;
            else
                fail("slip-map must be paired or rotate-cw");
        } else if (key == "zone") {
            std::string name;
            int r0, c0, r1, c1;
            if (!(line >> name >> r0 >> c0 >> r1 >> c1))
                fail("zone needs a name and two corners");
            if (std::find(kZoneNames.begin(), kZoneNames.end(), name) ==
                kZoneNames.end())
                fail("unknown zone '" + name + "'");
            if (r1 < r0 || c1 < c0) fail("zone corners are reversed");
            for (int r = r0; r <= r1; ++r)
                for (int c = c0; c <= c1; ++c)
                    lay.zones[name].push_back({r, c});
        } else {
            fail("unknown directive '" + key + "'");
        }
        std::string extra;
        if (line >> extra) fail("trailing input '" + extra + "'");
    }
    lineno = 0;
    if (!have_n) throw std::runtime_error("layout never sets n");
    for (auto& [name, cells] : lay.zones) {
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        for (const auto& [r, c] : cells)
            if (r < 0 || r >= lay.n || c < 0 || c >= lay.n)
                throw std::runtime_error("zone " + name +
                                         " leaves the grid");
    }
    return lay;
}

WarehouseInstance generate_warehouse(const GridLayout& layout) {
    const int n = layout.n;
    if (n < 2) throw std::invalid_argument("grid side must be at least 2");
    if (layout.start_row < 0 || layout.start_row >= n ||
        layout.start_col < 0 || layout.start_col >= n)
        throw std::invalid_argument("start cell is outside the grid");
    if (layout.slip < 0.0 || layout.slip >= 1.0)
        throw std::invalid_argument("slip must be a probability below 1");

    std::map<std::string, std::set<std::pair<int, int>>> zone;
    for (const auto& name : kZoneNames) {
        auto it = layout.zones.find(name);
        if (it != layout.zones.end())
            zone[name] = {it->second.begin(), it->second.end()};
        else
            zone[name] = {};
    }
    for (const auto& [name, cells] : layout.zones) {
        if (std::find(kZoneNames.begin(), kZoneNames.end(), name) ==
            kZoneNames.end())
            throw std::invalid_argument("unknown zone '" + name + "'");
        for (const auto& [r, c] : cells)
            if (r < 0 || r >= n || c < 0 || c >= n)
                throw std::invalid_argument("zone " + name +
                                            " leaves the grid");
    }
    if (zone["human-zone"].empty())
        throw std::invalid_argument("the human zone must not be empty");

    const auto& pick = zone["pick-up-area"];
    const auto& deliv = zone["delivery-area"];
    const auto& magnetic = zone["magnetic-field"];
    const auto& human = zone["human-zone"];

    // Moves that shrink the distance to the zone's bounding box.
    auto toward = [](int r, int c,
                     const std::set<std::pair<int, int>>& cells) {
        std::vector<int> out;
        if (cells.empty()) return out;
        int r0 = 1 << 30, r1 = -1, c0 = 1 << 30, c1 = -1;
        for (const auto& [rr, cc] : cells) {
            r0 = std::min(r0, rr);
            r1 = std::max(r1, rr);
            c0 = std::min(c0, cc);
            c1 = std::max(c1, cc);
        }
        if (r < r0) out.push_back(kSouth);
        if (r > r1) out.push_back(kNorth);
        if (c < c0) out.push_back(kEast);
        if (c > c1) out.push_back(kWest);
        return out;
    };

    WarehouseInstance inst;
    Mdp& m = inst.mdp;
    m.num_states = n * n;
    m.initial = layout.start_row * n + layout.start_col;
    m.action_names = {"east", "south", "west", "north", "stop"};
    m.state_names.resize(m.num_states);
    m.choices.resize(m.num_states);
    m.labels.resize(m.num_states);

    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const int s = r * n + c;
            m.state_names[s] =
                "r" + std::to_string(r) + "c" + std::to_string(c);
            std::set<int> acts;
            for (int a : toward(r, c, pick)) acts.insert(a);
            for (int a : toward(r, c, deliv)) acts.insert(a);
            if (pick.count({r, c}) || deliv.count({r, c})) acts.insert(kStop);
            if (human.count({r, c})) acts = {kStop};
            if (acts.empty()) acts = {kStop};
            for (int a : acts) {
                ActionChoice ch;
                ch.action = a;
                if (a == kStop) {
                    ch.transitions.push_back({s, 1.0});
                } else {
                    std::map<int, double> dist;
                    auto add = [&](int rr, int cc, double p) {
                        const int t = (rr >= 0 && rr < n && cc >= 0 && cc < n)
                                          ? rr * n + cc
                                          : s;  // walls keep the robot put
                        dist[t] += p;
                    };
                    if (magnetic.count({r, c}) && layout.slip > 0.0) {
                        add(r + kRowStep[a], c + kColStep[a],
                            1.0 - layout.slip);
                        const int sp = slip_partner(a, layout.slip_map);
                        add(r + kRowStep[sp], c + kColStep[sp], layout.slip);
                    } else {
                        add(r + kRowStep[a], c + kColStep[a], 1.0);
                    }
                    for (const auto& [t, p] : dist)
                        ch.transitions.push_back({t, p});
                }
                m.choices[s].push_back(std::move(ch));
            }
        }
    }

    // Propositions: per zone its membership and the four adjacency strips,
    // ids in first-use order, empty sets skipped.
    struct Strip {
        const char* name;
        int dr, dc;  // the neighbour that must sit inside the zone
    };
    const Strip strips[4] = {
        {"north", 1, 0}, {"south", -1, 0}, {"east", 0, -1}, {"west", 0, 1}};
    std::vector<std::set<int>> labels(m.num_states);
    for (const auto& zname : kZoneNames) {
        const auto& cells = zone[zname];
        std::vector<std::pair<std::string, std::vector<int>>> used;
        {
            std::vector<int> in_states;
            for (const auto& [r, c] : cells) in_states.push_back(r * n + c);
            used.push_back({"in-" + zname, std::move(in_states)});
        }
        for (const auto& st : strips) {
            std::vector<int> states;
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    if (cells.count({r + st.dr, c + st.dc}))
                        states.push_back(r * n + c);
            if (!states.empty())
                used.push_back(
                    {std::string(st.name) + "-of-" + zname, std::move(states)});
        }
        for (auto& [pname, states] : used) {
            if (states.empty()) continue;
            int p = m.prop_id(pname);
            if (p < 0) {
                p = (int)m.prop_names.size();
                m.prop_names.push_back(pname);
            }
            for (int s : states) labels[s].insert(p);
        }
    }
    for (int s = 0; s < m.num_states; ++s)
        m.labels[s] = {labels[s].begin(), labels[s].end()};

    inst.vocab.action_phrases = {"moves east", "moves south", "moves west",
                                 "moves north", "stops"};
    for (const auto& pname : m.prop_names) {
        if (pname.rfind("in-", 0) == 0) {
            inst.vocab.prop_phrases.push_back(
                "it is in the " + zone_phrase(pname.substr(3)));
        } else {
            const std::size_t of = pname.find("-of-");
            inst.vocab.prop_phrases.push_back(
                "it is " + pname.substr(0, of) + " of the " +
                zone_phrase(pname.substr(of + 4)));
        }
    }
    inst.target_prop = m.prop_id("in-human-zone");
    inst.terminal_action = kStop;
    return inst;
}

}  // namespace cexplain
