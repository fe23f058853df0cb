#include "vardom/io.hpp"
#include "vardom/util.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vardom {

namespace {

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    const auto size = in.tellg();
    in.seekg(0);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    in.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!in) throw std::runtime_error("read failed: " + path);
    return bytes;
}

void push_le64(std::vector<std::uint8_t>& out, double v) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>((bits >> (8 * b)) & 0xff));
}

double pull_le64(const std::uint8_t* p) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    return std::bit_cast<double>(bits);
}

} // namespace

nlohmann::ordered_json grid_to_json(const GridSpec& spec) {
    nlohmann::ordered_json j;
    j["dim"] = spec.dim;
    j["origin"] = spec.dim == 2 ? std::vector<double>{spec.origin[0], spec.origin[1]}
                                : std::vector<double>{spec.origin[0]};
    j["spacing"] = spec.spacing;
    j["shape"] = spec.dim == 2 ? std::vector<int>{spec.shape[0], spec.shape[1]}
                               : std::vector<int>{spec.shape[0]};
    return j;
}

GridSpec grid_from_json(const nlohmann::json& j) {
    GridSpec spec;
    spec.dim = j.at("dim").get<int>();
    const auto origin = j.at("origin").get<std::vector<double>>();
    const auto shape = j.at("shape").get<std::vector<int>>();
    spec.origin = {origin.at(0), origin.size() > 1 ? origin.at(1) : 0.0};
    spec.shape = {shape.at(0), shape.size() > 1 ? shape.at(1) : 1};
    spec.spacing = j.at("spacing").get<double>();
    spec.validate();
    return spec;
}

void write_mask(const DomainMask& m, const std::string& base) {
    write_bytes(base + ".mask", m.flags());
    write_text(base + ".json", grid_to_json(m.spec()).dump(2) + "\n");
}

DomainMask read_mask(const std::string& base) {
    const auto j = nlohmann::json::parse(read_text(base + ".json"));
    const GridSpec spec = grid_from_json(j);
    auto flags = read_bytes(base + ".mask");
    if (static_cast<std::int64_t>(flags.size()) != spec.cell_count())
        throw std::runtime_error("mask file size does not match sidecar shape: " + base);
    for (auto& f : flags)
        if (f > 1) throw std::runtime_error("mask file has non-boolean bytes: " + base);
    return DomainMask(spec, std::move(flags));
}

void write_field(const Field& f, const std::string& base, const std::string& mask_base) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(f.values().size() * 8);
    for (double v : f.values()) push_le64(bytes, v);
    write_bytes(base + ".f64", bytes);
    nlohmann::ordered_json j;
    j["mask"] = mask_base;
    j["count"] = f.values().size();
    write_text(base + ".json", j.dump(2) + "\n");
}

Field read_field(const std::string& base) {
    const auto j = nlohmann::json::parse(read_text(base + ".json"));
    const DomainMask mask = read_mask(j.at("mask").get<std::string>());
    const auto bytes = read_bytes(base + ".f64");
    if (bytes.size() % 8 != 0) throw std::runtime_error("field file size not a multiple of 8: " + base);
    std::vector<double> vals(bytes.size() / 8);
    for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = pull_le64(bytes.data() + 8 * k);
    return Field(mask, std::move(vals));
}

nlohmann::ordered_json report_to_json(const ConvergenceReport& rep) {
    nlohmann::ordered_json j;
    j["verdict"] = verdict_name(rep.verdict);
    j["k"] = rep.k;
    j["p"] = rep.p;
    j["tol_strong"] = rep.tol_strong;
    j["tol_weak"] = rep.tol_weak;
    j["symdiff_tol"] = rep.symdiff_tol;
    j["tail_fraction"] = rep.tail_fraction;
    j["tail_start"] = rep.tail_start;
    j["seed"] = rep.seed;
    j["strong_distance"] = rep.strong_distance;
    j["norm_gap"] = rep.norm_gap;
    j["strong_tail"] = rep.strong_tail;
    j["weak_tail"] = rep.weak_tail;
    j["support_leakage"] = rep.support_leakage;
    j["weak_derivative_residual"] = rep.weak_derivative_residual;
    j["symdiff_tail"] = rep.symdiff_tail;
    nlohmann::ordered_json cauchy = nlohmann::ordered_json::array();
    for (const auto& e : rep.cauchy) cauchy.push_back({{"start", e.start}, {"modulus", e.modulus}});
    j["cauchy_modulus"] = cauchy;
    nlohmann::ordered_json pairings = nlohmann::ordered_json::array();
    for (const auto& pr : rep.pairings)
        pairings.push_back({{"label", pr.label}, {"alpha", pr.alpha}, {"tail_max", pr.tail_max}});
    j["pairing_tails"] = pairings;
    j["notes"] = rep.notes;
    return j;
}

std::string report_to_csv(const ConvergenceReport& rep) {
    std::ostringstream out;
    out << "i,strong_distance,norm_gap,max_pairing_residual\n";
    const std::size_t n = rep.strong_distance.size();
    for (std::size_t i = 0; i < n; ++i) {
        double worst = 0.0;
        for (const auto& pr : rep.pairings)
            if (i < pr.residuals.size()) worst = std::max(worst, pr.residuals[i]);
        out << (i + 1) << ',' << format_double(rep.strong_distance[i]) << ','
            << format_double(rep.norm_gap[i]) << ',' << format_double(worst) << '\n';
    }
    return out.str();
}

std::string poincare_to_csv(const std::vector<PoincareEstimate>& estimates) {
    std::ostringstream out;
    out << "i,measure,constant,method\n";
    for (std::size_t i = 0; i < estimates.size(); ++i)
        out << (i + 1) << ',' << format_double(estimates[i].domain_measure) << ','
            << format_double(estimates[i].constant) << ',' << estimates[i].method << '\n';
    return out.str();
}

nlohmann::ordered_json equivalence_to_json(const EquivalenceReport& rep) {
    nlohmann::ordered_json j;
    j["ze"] = notion_verdict_name(rep.ze);
    j["ale"] = notion_verdict_name(rep.ale);
    j["e"] = notion_verdict_name(rep.e);
    j["tol"] = rep.tol;
    auto agreement = [](int a) {
        return a < 0 ? std::string("not-comparable") : (a == 1 ? std::string("agree") : std::string("disagree"));
    };
    j["agreement"] = {{"ze_ale", agreement(rep.agree_ze_ale)},
                      {"ze_e", agreement(rep.agree_ze_e)},
                      {"ale_e", agreement(rep.agree_ale_e)}};
    j["notes"] = rep.notes;
    return j;
}

std::string equivalence_to_csv(const EquivalenceReport& rep) {
    std::ostringstream out;
    out << "i,ze_distance,ale_distance,e_distance\n";
    const std::size_t n = rep.ze_distances.size();
    auto cell = [&](const std::vector<double>& v, std::size_t i) {
        return i < v.size() ? format_double(v[i]) : std::string("");
    };
    for (std::size_t i = 0; i < n; ++i)
        out << (i + 1) << ',' << cell(rep.ze_distances, i) << ',' << cell(rep.ale_distances, i)
            << ',' << cell(rep.e_distances, i) << '\n';
    return out.str();
}

std::string shape_table_to_csv(const ShapeSearchResult& res) {
    std::ostringstream out;
    out << "c,measure,drag,price,objective,failed\n";
    for (const auto& row : res.table)
        out << format_double(row.c) << ',' << format_double(row.measure) << ','
            << format_double(row.drag) << ',' << format_double(row.price) << ','
            << format_double(row.objective) << ',' << (row.failed ? 1 : 0) << '\n';
    return out.str();
}

nlohmann::ordered_json shape_result_to_json(const ShapeSearchResult& res) {
    nlohmann::ordered_json j;
    j["best_c"] = res.best_c;
    j["lambda"] = res.lambda;
    nlohmann::ordered_json table = nlohmann::ordered_json::array();
    for (const auto& row : res.table)
        table.push_back({{"c", row.c},
                         {"measure", row.measure},
                         {"drag", row.drag},
                         {"price", row.price},
                         {"objective", row.objective},
                         {"failed", row.failed},
                         {"note", row.note}});
    j["table"] = table;
    return j;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace vardom
