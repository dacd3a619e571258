#include "bandsurf/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bandsurf/errors.hpp"

namespace bandsurf::io {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json to_json(const SupportSet& s) {
    return json{{"dims", s.dims()}, {"freqs", s.freqs()}};
}

SupportSet support_from_json(const json& j) {
    return SupportSet(j.at("dims").get<std::size_t>(), j.at("freqs").get<std::vector<Freq>>());
}

json complex_to_json(const CVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i].real());
        out.push_back(v[i].imag());
    }
    return out;
}

CVector complex_from_json(const json& j) {
    const auto flat = j.get<std::vector<double>>();
    if (flat.size() % 2 != 0) throw ParseError("interleaved complex list has odd length");
    CVector v(static_cast<Eigen::Index>(flat.size() / 2));
    for (std::size_t i = 0; i < flat.size() / 2; ++i) v[static_cast<Eigen::Index>(i)] = Complex(flat[2 * i], flat[2 * i + 1]);
    return v;
}

json to_json(const TrigPolynomial& p) {
    json j = to_json(p.support());
    j["coeffs"] = complex_to_json(p.coeffs());
    return j;
}

TrigPolynomial poly_from_json(const json& j) {
    // Coefficients follow the order stored in the file; reorder into canonical layout.
    const auto dims = j.at("dims").get<std::size_t>();
    const auto freqs = j.at("freqs").get<std::vector<Freq>>();
    const CVector raw = complex_from_json(j.at("coeffs"));
    if (static_cast<std::size_t>(raw.size()) != freqs.size()) {
        throw ParseError("coefficient count does not match frequency count");
    }
    SupportSet support(dims, freqs);
    if (support.size() != freqs.size()) throw ParseError("duplicate frequencies in polynomial");
    CVector c(raw.size());
    for (std::size_t i = 0; i < freqs.size(); ++i) c[support.index_of(freqs[i])] = raw[static_cast<Eigen::Index>(i)];
    return TrigPolynomial(std::move(support), std::move(c));
}

json to_json(const KernelConfig& c) {
    if (c.kind == KernelConfig::Kind::Rect) {
        return json{{"kind", "rect"}, {"lo", c.lo}, {"hi", c.hi}};
    }
    json j{{"kind", "ball"}, {"d", c.radius}};
    if (c.q == Norm::Inf) {
        j["q"] = "inf";
    } else {
        j["q"] = c.q == Norm::L1 ? 1 : 2;
    }
    if (c.dims) j["dims"] = *c.dims;
    return j;
}

KernelConfig kernel_config_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "rect") {
        return KernelConfig::rect(j.at("lo").get<std::vector<int>>(), j.at("hi").get<std::vector<int>>());
    }
    if (kind == "ball") {
        const json& q = j.at("q");
        const Norm norm = parse_norm(q.is_string() ? q.get<std::string>() : std::to_string(q.get<int>()));
        std::optional<std::size_t> dims;
        if (j.contains("dims")) dims = j.at("dims").get<std::size_t>();
        return KernelConfig::ball(j.at("d").get<int>(), norm, dims);
    }
    throw std::invalid_argument("unknown kernel kind '" + kind + "' (expected rect or ball)");
}

json to_json(const NullSpaceBasis& b) {
    json vecs = json::array();
    for (Eigen::Index c = 0; c < b.vectors.cols(); ++c) vecs.push_back(complex_to_json(b.vectors.col(c)));
    std::vector<double> sigma(b.sigma.data(), b.sigma.data() + b.sigma.size());
    return json{{"support", to_json(b.support)}, {"null_vectors", vecs}, {"sigma", sigma},
                {"tol", b.tol},                  {"rank", b.rank},       {"null_dim", b.dim()}};
}

AlphaSolver parse_solver(const std::string& name) {
    if (name == "features") return AlphaSolver::Features;
    if (name == "kernel") return AlphaSolver::Kernel;
    throw std::invalid_argument("unknown solver '" + name + "' (expected features or kernel)");
}

json to_json(const AnchorModel& m) {
    json anchors = json::array();
    for (std::size_t i = 0; i < m.anchors().size(); ++i) {
        const auto p = m.anchors().point(i);
        anchors.push_back(std::vector<double>(p.data(), p.data() + p.size()));
    }
    json outputs = json::array();
    for (Eigen::Index r = 0; r < m.outputs().rows(); ++r) outputs.push_back(complex_to_json(m.outputs().row(r).transpose()));
    return json{{"anchors", anchors}, {"kernel", to_json(m.kernel_config())}, {"outputs", outputs},
                {"output_dims", m.output_dims()}, {"pinv_cutoff", m.cutoff()}, {"ridge", m.ridge()},
                {"solver", m.solver() == AlphaSolver::Features ? "features" : "kernel"}};
}

AnchorModel anchor_model_from_json(const json& j) {
    const auto rows = j.at("anchors").get<std::vector<std::vector<double>>>();
    if (rows.empty()) throw ParseError("model has no anchors");
    Matrix pts(static_cast<Eigen::Index>(rows.front().size()), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.front().size()) throw ParseError("anchors have inconsistent dimension");
        for (std::size_t d = 0; d < rows[i].size(); ++d) pts(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i)) = rows[i][d];
    }
    const auto m = j.at("output_dims").get<std::size_t>();
    const auto& out = j.at("outputs");
    if (out.size() != m) throw ParseError("output row count does not match output_dims");
    CMatrix f(static_cast<Eigen::Index>(m), pts.cols());
    for (std::size_t r = 0; r < m; ++r) {
        const CVector row = complex_from_json(out[r]);
        if (row.size() != pts.cols()) throw ParseError("output row length does not match anchor count");
        f.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return AnchorModel(PointCloud(std::move(pts)), kernel_config_from_json(j.at("kernel")), std::move(f),
                       j.value("pinv_cutoff", kDefaultPinvCutoff), j.value("ridge", 0.0),
                       parse_solver(j.value("solver", std::string("features"))));
}

namespace {

std::size_t line_of_byte(const std::string& path, std::size_t byte) {
    std::ifstream in(path, std::ios::binary);
    std::size_t line = 1;
    char ch;
    for (std::size_t i = 1; i < byte && in.get(ch); ++i)
        if (ch == '\n') ++line;
    return line;
}

} // namespace

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path, ParseError(e.what(), e.byte == 0 ? 0 : line_of_byte(path, e.byte)));
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

void write_cloud_csv(std::ostream& out, const PointCloud& cloud) {
    for (std::size_t d = 0; d < cloud.dims(); ++d) out << (d ? "," : "") << 'x' << d + 1;
    if (cloud.has_labels()) out << ",component";
    out << '\n';
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        for (Eigen::Index d = 0; d < p.size(); ++d) out << (d ? "," : "") << format_double(p[d]);
        if (cloud.has_labels()) out << ',' << cloud.labels()[i];
        out << '\n';
    }
}

void write_cloud_csv(const std::string& path, const PointCloud& cloud) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_cloud_csv(out, cloud);
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s, std::size_t line) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    auto res = std::from_chars(first, last, v);
    if (s.empty() || res.ec != std::errc() || res.ptr != last) {
        throw ParseError("invalid number '" + s + "'", line);
    }
    return v;
}

} // namespace

std::ptrdiff_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<std::ptrdiff_t>(i);
    }
    return -1;
}

Table read_table_csv(std::istream& in) {
    Table t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        t.header = split(line);
        break;
    }
    if (t.header.empty()) throw ParseError("missing CSV header", lineno ? lineno : 1);
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (cells.size() != t.header.size()) {
            throw ParseError("expected " + std::to_string(t.header.size()) + " columns, got " +
                                 std::to_string(cells.size()),
                             lineno);
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_number(c, lineno));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table read_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return read_table_csv(in);
    } catch (const ParseError& e) {
        throw ParseError(path, e);
    }
}

PointCloud read_cloud_csv(std::istream& in) {
    const Table t = read_table_csv(in);
    std::size_t dims = 0;
    while (t.column("x" + std::to_string(dims + 1)) == static_cast<std::ptrdiff_t>(dims)) ++dims;
    if (dims == 0) throw ParseError("cloud CSV must start with columns x1..xn", 1);
    const auto comp = t.column("component");
    if (t.header.size() != dims + (comp >= 0 ? 1 : 0)) throw ParseError("unexpected columns in cloud CSV", 1);
    Matrix pts(static_cast<Eigen::Index>(dims), static_cast<Eigen::Index>(t.rows.size()));
    std::vector<int> labels;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (std::size_t d = 0; d < dims; ++d) pts(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i)) = t.rows[i][d];
        if (comp >= 0) labels.push_back(static_cast<int>(t.rows[i][static_cast<std::size_t>(comp)]));
    }
    return PointCloud(std::move(pts), std::move(labels));
}

PointCloud read_cloud_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return read_cloud_csv(in);
    } catch (const ParseError& e) {
        throw ParseError(path, e);
    }
}

void write_complex_matrix_csv(std::ostream& out, const CMatrix& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << "re_" << c + 1 << ",im_" << c + 1;
    out << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out << (c ? "," : "") << format_double(m(r, c).real()) << ',' << format_double(m(r, c).imag());
        }
        out << '\n';
    }
}

void write_phase_table_csv(std::ostream& out, const std::vector<PhaseRow>& rows) {
    const bool multi = !rows.empty() && rows.front().per_component.size() > 1;
    out << "N,trials,successes,fraction" << (multi ? ",per_component" : "") << '\n';
    for (const auto& r : rows) {
        out << r.total << ',' << r.trials << ',' << r.successes << ',' << format_double(r.fraction());
        if (multi) {
            out << ',';
            for (std::size_t i = 0; i < r.per_component.size(); ++i) out << (i ? "+" : "") << r.per_component[i];
        }
        out << '\n';
    }
}

void write_denoise_log_csv(std::ostream& out, const std::vector<IterationMetrics>& log) {
    out << "iteration,objective,surrogate,mean_displacement\n";
    for (const auto& m : log) {
        out << m.iteration << ',' << format_double(m.objective) << ',' << format_double(m.surrogate) << ','
            << format_double(m.mean_displacement) << '\n';
    }
}

} // namespace bandsurf::io
