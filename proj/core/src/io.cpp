#include "utfsr/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "utfsr/errors.hpp"

namespace utfsr::io {

namespace {

using nlohmann::json;

Node node_from_label(const json& v, std::size_t n, const char* field) {
    if (!v.is_number_integer()) throw FormatError(std::string("'") + field + "' must be an integer node label");
    const auto label = v.get<long long>();
    if (label < 1 || static_cast<std::size_t>(label) > n) {
        throw FormatError(std::string("'") + field + "' = " + std::to_string(label) + " is outside 1.." +
                          std::to_string(n));
    }
    return static_cast<Node>(label - 1);
}

std::vector<double> coeff_list(const json& v, const char* field) {
    if (!v.is_array()) throw FormatError(std::string("'") + field + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& c : v) {
        if (!c.is_number()) throw FormatError(std::string("'") + field + "' must contain only numbers");
        out.push_back(c.get<double>());
    }
    return out;
}

RationalTransfer transfer_from(const json& obj, const char* num_key, const char* den_key, bool num_required) {
    LaurentPolynomial num = LaurentPolynomial::constant(1.0);
    if (obj.contains(num_key)) {
        num = LaurentPolynomial(coeff_list(obj.at(num_key), num_key));
    } else if (num_required) {
        throw FormatError(std::string("missing '") + num_key + "'");
    }
    LaurentPolynomial den = LaurentPolynomial::constant(1.0);
    if (obj.contains(den_key)) den = LaurentPolynomial(coeff_list(obj.at(den_key), den_key));
    try {
        return RationalTransfer(std::move(num), std::move(den));
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("'") + den_key + "': " + e.what());
    }
}

json edge_list(const UndirectedGraph& g) {
    json out = json::array();
    for (const auto& e : g.edges()) out.push_back({e.a + 1, e.b + 1});
    return out;
}

json labels(const std::vector<Node>& nodes) {
    json out = json::array();
    for (Node v : nodes) out.push_back(v + 1);
    return out;
}

// 6 significant digits, tiny values as 0.
double report_margin(double m) {
    if (std::abs(m) < 1e-10) return 0.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", m);
    return std::strtod(buf, nullptr);
}

json witness_json(const std::optional<MdWitness>& w) {
    if (!w) return nullptr;
    return {{"target", w->target + 1},
            {"tested", w->tested + 1},
            {"present", labels(w->present)},
            {"delayed", labels(w->delayed)},
            {"margin", report_margin(w->margin)},
            {"low_confidence", w->low_confidence}};
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

double stable_round(double value) {
    if (!std::isfinite(value)) return value;
    if (std::abs(value) < 1e-10) return 0.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return std::strtod(buf, nullptr);
}

Ldim model_from_json(const json& doc) {
    if (!doc.is_object()) throw FormatError("model document must be a JSON object");
    if (!doc.contains("n") || !doc.at("n").is_number_integer() || doc.at("n").get<long long>() < 1) {
        throw FormatError("model needs a positive integer 'n'");
    }
    const auto n = static_cast<std::size_t>(doc.at("n").get<long long>());
    std::vector<Link> links;
    if (doc.contains("edges")) {
        if (!doc.at("edges").is_array()) throw FormatError("'edges' must be an array");
        for (const auto& e : doc.at("edges")) {
            if (!e.is_object() || !e.contains("from") || !e.contains("to")) {
                throw FormatError("each edge needs 'from' and 'to'");
            }
            links.push_back(Link{node_from_label(e.at("from"), n, "from"), node_from_label(e.at("to"), n, "to"),
                                 transfer_from(e, "num_coeffs", "den_coeffs", true)});
        }
    }
    std::vector<NoiseChannel> noise;
    if (doc.contains("noise")) {
        if (!doc.at("noise").is_array()) throw FormatError("'noise' must be an array");
        for (const auto& ch : doc.at("noise")) {
            NoiseChannel c;
            if (ch.contains("variance")) {
                if (!ch.at("variance").is_number()) throw FormatError("'variance' must be a number");
                c.variance = ch.at("variance").get<double>();
            }
            c.coloring = transfer_from(ch, "coloring_coeffs", "coloring_den_coeffs", false);
            noise.push_back(std::move(c));
        }
    }
    try {
        return Ldim(n, std::move(links), std::move(noise));
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("invalid model: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw FormatError(std::string("invalid model: ") + e.what());
    }
}

json model_to_json(const Ldim& m) {
    json edges = json::array();
    for (const auto& l : m.links()) {
        edges.push_back({{"from", l.from + 1},
                         {"to", l.to + 1},
                         {"num_coeffs", l.transfer.num().coeffs()},
                         {"den_coeffs", l.transfer.den().coeffs()}});
    }
    json noise = json::array();
    for (const auto& ch : m.noise()) {
        noise.push_back({{"variance", ch.variance},
                         {"coloring_coeffs", ch.coloring.num().coeffs()},
                         {"coloring_den_coeffs", ch.coloring.den().coeffs()}});
    }
    return {{"n", m.size()}, {"edges", edges}, {"noise", noise}};
}

json psd_to_json(const SpectralDensity& s) {
    const auto n = s.dim();
    const std::size_t grid = s.grid().size();
    json half = json::array();
    for (std::size_t k = 0; k <= grid / 2; ++k) {
        json re = json::array();
        json im = json::array();
        for (Eigen::Index a = 0; a < n; ++a) {
            json re_row = json::array();
            json im_row = json::array();
            for (Eigen::Index b = 0; b < n; ++b) {
                re_row.push_back(stable_round(s.at(k)(a, b).real()));
                im_row.push_back(stable_round(s.at(k)(a, b).imag()));
            }
            re.push_back(std::move(re_row));
            im.push_back(std::move(im_row));
        }
        half.push_back({{"k", k}, {"re", std::move(re)}, {"im", std::move(im)}});
    }
    return {{"format", "utfsr-psd"}, {"version", 1}, {"n", n}, {"grid_size", grid}, {"half", std::move(half)}};
}

bool is_psd_document(const json& doc) {
    return doc.is_object() && doc.value("format", std::string()) == "utfsr-psd";
}

SpectralDensity psd_from_json(const json& doc) {
    if (!is_psd_document(doc)) throw FormatError("not a utfsr-psd document");
    try {
        const auto n = doc.at("n").get<Eigen::Index>();
        const FrequencyGrid grid(doc.at("grid_size").get<std::size_t>());
        const auto& half = doc.at("half");
        std::vector<Eigen::MatrixXcd> values(grid.size() / 2 + 1);
        if (half.size() != values.size()) throw FormatError("half grid has the wrong number of samples");
        for (const auto& entry : half) {
            const auto k = entry.at("k").get<std::size_t>();
            if (k >= values.size()) throw FormatError("grid index out of range");
            Eigen::MatrixXcd m(n, n);
            for (Eigen::Index a = 0; a < n; ++a)
                for (Eigen::Index b = 0; b < n; ++b)
                    m(a, b) = Complex(entry.at("re").at(static_cast<std::size_t>(a)).at(static_cast<std::size_t>(b)).get<double>(),
                                      entry.at("im").at(static_cast<std::size_t>(a)).at(static_cast<std::size_t>(b)).get<double>());
            values[k] = std::move(m);
        }
        for (const auto& v : values)
            if (v.size() == 0) throw FormatError("half grid is missing a frequency");
        return SpectralDensity::from_half_grid(grid, std::move(values));
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed PSD document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("invalid PSD: ") + e.what());
    }
}

json report_to_json(const ReconstructionReport& r) {
    json triangles = json::array();
    for (const auto& t : r.triangles) {
        json removable = json::array();
        for (const auto& e : t.removable_edges) removable.push_back({e.a + 1, e.b + 1});
        json witnesses = json::array();
        for (const UndirectedEdge e : {UndirectedEdge(t.nodes[0], t.nodes[1]), UndirectedEdge(t.nodes[0], t.nodes[2]),
                                       UndirectedEdge(t.nodes[1], t.nodes[2])}) {
            const auto& ev = r.evidence.at(e);
            witnesses.push_back({{"edge", {e.a + 1, e.b + 1}},
                                 {"removable", ev.removable()},
                                 {"md1", witness_json(ev.md1)},
                                 {"md2", witness_json(ev.md2)},
                                 {"md3", witness_json(ev.md3)},
                                 {"subsets_searched", ev.subsets_searched},
                                 {"inconclusive", ev.inconclusive}});
        }
        triangles.push_back({{"nodes", {t.nodes[0] + 1, t.nodes[1] + 1, t.nodes[2] + 1}},
                             {"removable_edges", std::move(removable)},
                             {"witnesses", std::move(witnesses)}});
    }
    return {{"status", std::string(to_string(r.status))},
            {"n", r.node_count},
            {"config",
             {{"grid_size", r.grid_size},
              {"max_lag", r.options.max_lag},
              {"eps_sep", r.options.eps_sep},
              {"search_cap", r.options.search_cap}}},
            {"moral_bound_edges", edge_list(r.moral_bound)},
            {"output_edges", edge_list(r.output)},
            {"triangles", std::move(triangles)}};
}

std::string report_to_dot(const ReconstructionReport& r) {
    std::ostringstream out;
    out << "graph skeleton {\n";
    out << "  label=\"" << to_string(r.status) << "\";\n";
    for (std::size_t v = 0; v < r.node_count; ++v) out << "  y" << v + 1 << ";\n";
    for (const auto& e : r.output.edges()) out << "  y" << e.a + 1 << " -- y" << e.b + 1 << ";\n";
    out << "}\n";
    return out.str();
}

json verdict_to_json(const SeparationVerdict& v) {
    json cond = json::array();
    for (const auto& c : v.conditioning) {
        cond.push_back({{"node", c.node + 1}, {"lag_class", c.lag_class == LagClass::Present ? "present" : "delayed"}});
    }
    return {{"separated", v.separated},
            {"margin", report_margin(v.margin)},
            {"target", v.target + 1},
            {"tested", {{"node", v.tested.node + 1},
                        {"lag_class", v.tested.lag_class == LagClass::Present ? "present" : "delayed"}}},
            {"conditioning", std::move(cond)},
            {"low_confidence", v.low_confidence}};
}

json utf_report_to_json(const UtfReport& r) {
    json cycles = json::array();
    for (const auto& e : r.two_cycles) cycles.push_back({e.a + 1, e.b + 1});
    json tris = json::array();
    for (const auto& t : r.triangles) tris.push_back({t[0] + 1, t[1] + 1, t[2] + 1});
    return {{"utf", r.is_utf()}, {"two_cycles", std::move(cycles)}, {"triangles", std::move(tris)}};
}

void write_csv(std::ostream& out, const Eigen::MatrixXd& samples) {
    for (Eigen::Index i = 0; i < samples.rows(); ++i) out << (i ? "," : "") << "y" << i + 1;
    out << '\n';
    std::string line;
    for (Eigen::Index t = 0; t < samples.cols(); ++t) {
        line.clear();
        for (Eigen::Index i = 0; i < samples.rows(); ++i) {
            if (i) line += ',';
            line += format_double(samples(i, t));
        }
        line += '\n';
        out << line;
    }
}

Eigen::MatrixXd read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty CSV input");
    const auto columns = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ',') + 1);
    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string cell;
        Eigen::Index count = 0;
        while (std::getline(fields, cell, ',')) {
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc()) throw FormatError("non-numeric CSV cell '" + cell + "'");
            values.push_back(v);
            ++count;
        }
        if (count != columns) throw FormatError("CSV row " + std::to_string(rows + 2) + " has the wrong width");
        ++rows;
    }
    Eigen::MatrixXd out(columns, static_cast<Eigen::Index>(rows));
    for (std::size_t t = 0; t < rows; ++t)
        for (Eigen::Index i = 0; i < columns; ++i) out(i, static_cast<Eigen::Index>(t)) = values[t * static_cast<std::size_t>(columns) + static_cast<std::size_t>(i)];
    return out;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace utfsr::io
