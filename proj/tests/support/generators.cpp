#include "generators.hpp"

#include <random>

#include "ssqa/address.hpp"

namespace gen {

namespace {

std::string cell(std::int32_t column, std::int32_t row) { return ssqa::to_a1(column, row); }

}  // namespace

GeneratedModel layered_model(std::size_t cells, std::uint32_t seed) {
    std::mt19937 rng(seed);
    // Roughly 20% inputs, 65% calcs, 15% reports; every cell has a label beside it.
    std::size_t pairs = cells / 2;
    std::size_t inputs = std::max<std::size_t>(1, pairs / 5);
    std::size_t reports = std::max<std::size_t>(1, pairs * 3 / 20);
    std::size_t calcs = std::max<std::size_t>(1, pairs - inputs - reports);

    GeneratedModel m;
    std::string& out = m.fixture;
    out.reserve(cells * 32);
    out += "[sheet: Inputs]\n";
    for (std::size_t i = 1; i <= inputs; ++i) {
        auto r = static_cast<std::int32_t>(i);
        out += cell(1, r) + " = \"Input " + std::to_string(i) + "\"\n";
        out += cell(2, r) + " = " + std::to_string(1 + rng() % 1000) + "\n";
    }
    out += "[sheet: Calc]\n";
    for (std::size_t i = 1; i <= calcs; ++i) {
        auto r = static_cast<std::int32_t>(i);
        out += cell(1, r) + " = \"Step " + std::to_string(i) + "\"\n";
        auto in = static_cast<std::int32_t>(1 + rng() % inputs);
        std::string f = "=Inputs!" + cell(2, in);
        if (i > 1) {
            auto prev = static_cast<std::int32_t>(1 + rng() % (i - 1));
            f += (rng() % 2 ? "*" : "+") + cell(2, prev);
        }
        if (i > 2 && rng() % 3 == 0) {
            auto lo = static_cast<std::int32_t>(1 + rng() % (i - 2));
            auto hi = std::min<std::int32_t>(lo + 5, r - 1);
            f = "SUM(" + cell(2, lo) + ":" + cell(2, hi) + ")+" + f.substr(1);
            f = "=" + f;
        }
        out += cell(2, r) + " = " + f + "\n";
    }
    out += "[sheet: Report]\n";
    for (std::size_t i = 1; i <= reports; ++i) {
        auto r = static_cast<std::int32_t>(i);
        out += cell(1, r) + " = \"Result " + std::to_string(i) + "\"\n";
        auto src = static_cast<std::int32_t>(calcs - (i - 1) % calcs);
        out += cell(2, r) + " = =Calc!" + cell(2, src) + "\n";
    }
    m.manifest = "inputs.assumptions = Inputs!*\ncomputations = Calc!*\nreports = Report!*\n";
    m.cells = 2 * (inputs + calcs + reports);
    m.formulas = calcs + reports;
    return m;
}

std::string sparse_listing(std::size_t cells, std::size_t formulas) {
    std::string out = "[sheet: Listing]\n";
    std::size_t constants = cells - formulas;
    std::size_t rows = (constants + 1) / 2;
    std::size_t written = 0;
    for (std::size_t r = 1; r <= rows && written < constants; ++r) {
        out += cell(1, static_cast<std::int32_t>(r)) + " = \"Item " + std::to_string(r) + "\"\n";
        if (++written == constants) break;
        out += cell(2, static_cast<std::int32_t>(r)) + " = " + std::to_string(r * 3) + "\n";
        ++written;
    }
    for (std::size_t k = 0; k < formulas; ++k)
        out += cell(4, static_cast<std::int32_t>(k + 1)) + " = =SUM(B1:B" + std::to_string(rows) + ")*" +
               std::to_string(k + 1) + "\n";
    return out;
}

std::string random_workbook(std::uint32_t seed, std::size_t cells) {
    std::mt19937 rng(seed);
    const char* sheets[] = {"A", "B", "C"};
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    auto ref = [&](bool qualify) {
        std::string r = cell(static_cast<std::int32_t>(1 + pick(6)), static_cast<std::int32_t>(1 + pick(8)));
        if (pick(4) == 0) r = "$" + r;
        return qualify ? std::string(sheets[pick(3)]) + "!" + r : r;
    };
    auto operand = [&]() -> std::string {
        switch (pick(9)) {
        case 0: return std::to_string(pick(100));
        case 1: return "SUM(" + ref(false) + ":" + cell(6, 8) + ")";
        case 2: return ref(true);
        case 3: return "Rate";
        case 4: return "INDIRECT(\"" + ref(false) + "\")";
        case 5: return "IF(" + ref(false) + ">0,\"" + ref(false) + "\"," + ref(false) + ")";
        case 6: return "'C'!" + ref(false);
        case 7: return "MAX(" + ref(false) + "," + ref(true) + ")";
        default: return ref(false);
        }
    };

    std::string out = "[name: Rate = A!B2]\n";
    std::size_t per_sheet = cells / 3;
    for (const char* s : sheets) {
        out += std::string("[sheet: ") + s + "]\n";
        std::vector<std::pair<std::int32_t, std::int32_t>> used;
        for (std::size_t k = 0; k < per_sheet; ++k) {
            auto c = static_cast<std::int32_t>(1 + pick(6));
            auto r = static_cast<std::int32_t>(1 + pick(8));
            bool dup = false;
            for (auto& u : used) dup |= u.first == c && u.second == r;
            if (dup) continue;
            used.emplace_back(c, r);
            std::string lhs = cell(c, r) + " = ";
            switch (pick(4)) {
            case 0: out += lhs + std::to_string(pick(1000)) + "\n"; break;
            case 1: out += lhs + "\"label " + std::to_string(k) + "\"\n"; break;
            default: {
                std::string f = operand();
                for (std::size_t t = pick(3); t > 0; --t) f += (pick(2) ? "+" : "*") + operand();
                out += lhs + "=" + f + "\n";
            }
            }
        }
    }
    return out;
}

std::vector<std::vector<std::size_t>> random_graph(std::uint32_t seed, std::size_t nodes, double density) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::vector<std::size_t>> adj(nodes);
    for (std::size_t u = 0; u < nodes; ++u)
        for (std::size_t v = 0; v < nodes; ++v)
            if (coin(rng) < density) adj[u].push_back(v);
    return adj;
}

}  // namespace gen
