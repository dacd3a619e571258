#include "commands.hpp"

#include <cctype>
#include <filesystem>
#include <functional>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "bandsurf/denoise.hpp"
#include "bandsurf/errors.hpp"
#include "bandsurf/funcrep.hpp"
#include "bandsurf/io.hpp"
#include "bandsurf/recovery.hpp"
#include "bandsurf/rng.hpp"
#include "bandsurf/version.hpp"

namespace bandsurf::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

struct Global {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    double tol = kDefaultNullTol;
    bool seed_given = false;
    bool tol_given = false;
};

/// Output path: relative names land in --out-dir.
std::string out_path(const Global& g, const std::string& name) {
    const fs::path p(name);
    if (p.is_absolute()) return p.string();
    return (fs::path(g.out_dir) / p).string();
}

/// "3x3" or "5x5x5" -> centered rectangle sizes.
std::vector<int> parse_sizes(const std::string& s) {
    std::vector<int> sizes;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, 'x')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || tok.empty() || v < 1 || v % 2 == 0)
            throw std::invalid_argument("bad support size '" + s + "' (expected odd sides like 3x3)");
        sizes.push_back(v);
    }
    if (sizes.empty()) throw std::invalid_argument("empty support size");
    return sizes;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

/// A JSON argument: inline object, shorthand like "3x3" (kernel configs), or a file path.
json json_arg(const std::string& arg) {
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) {
        try {
            return json::parse(arg);
        } catch (const json::parse_error& e) {
            throw ParseError(e.what());
        }
    }
    return io::read_json_file(arg);
}

KernelConfig kernel_arg(const std::string& arg) {
    if (!arg.empty() && std::isdigit(static_cast<unsigned char>(arg.front())) && !fs::exists(arg))
        return KernelConfig::centered(parse_sizes(arg));
    const json j = json_arg(arg);
    if (j.is_string()) return KernelConfig::centered(parse_sizes(j.get<std::string>()));
    return io::kernel_config_from_json(j);
}

SupportSet support_of(const KernelConfig& k, std::size_t n) {
    if (k.fixed_dims() && *k.fixed_dims() != n) throw DimensionMismatch(*k.fixed_dims(), n);
    return k.support(n);
}

SupportSet support_from_json_or_size(const json& j) {
    if (j.is_string()) return centered_rect(parse_sizes(j.get<std::string>()));
    if (j.contains("freqs")) return io::support_from_json(j);
    const auto k = io::kernel_config_from_json(j);
    const auto n = k.fixed_dims();
    if (!n) throw std::invalid_argument("factor support needs explicit dims");
    return k.support(*n);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

void write_cloud(const std::string& path, const PointCloud& c) {
    std::ostringstream ss;
    io::write_cloud_csv(ss, c);
    write_text(path, ss.str());
}

void write_manifest(const Global& g, const std::string& command, json config, const std::vector<std::string>& outputs) {
    json m{{"command", command},
           {"version", kVersion},
           {"seed", g.seed},
           {"tol", g.tol},
           {"config", std::move(config)},
           {"outputs", outputs}};
    write_text(out_path(g, "manifest.json"), m.dump(2) + "\n");
}

// -- sample -----------------------------------------------------------------

struct SampleOpts {
    std::string support, poly, product, per_component, out = "samples.csv", poly_out = "poly.json";
    std::size_t n = 0;
};

void cmd_sample(const Global& g, const SampleOpts& o, std::ostream& out) {
    const int sources = !o.support.empty() + !o.poly.empty() + !o.product.empty();
    if (sources != 1) throw std::invalid_argument("sample needs exactly one of --support, --poly, --product");
    PointCloud cloud(1);
    json poly_json;
    json config{{"out", o.out}, {"poly_out", o.poly_out}};
    if (!o.product.empty()) {
        const auto names = split_list(o.product);
        const auto counts_s = split_list(o.per_component);
        if (counts_s.size() != names.size())
            throw std::invalid_argument("--per-component needs one count per --product factor");
        std::optional<TrigPolynomial> product;
        json factors = json::array();
        std::vector<std::size_t> counts;
        for (std::size_t i = 0; i < names.size(); ++i) {
            const auto factor = random_real_poly_with_zero_set(centered_rect(parse_sizes(names[i])), mix_seed(g.seed, i));
            const std::size_t count = std::stoul(counts_s[i]);
            counts.push_back(count);
            auto part = sample_zero_set(factor, count, mix_seed(g.seed, 100 + i));
            if (i == 0) cloud = PointCloud(factor.dims());
            if (part.dims() != cloud.dims()) throw DimensionMismatch(cloud.dims(), part.dims());
            cloud.append(PointCloud(part.points(), std::vector<int>(count, static_cast<int>(i) + 1)));
            factors.push_back(io::to_json(factor));
            product = product ? multiply(*product, factor) : factor;
        }
        poly_json = io::to_json(*product);
        poly_json["factors"] = factors;
        config["product"] = names;
        config["per_component"] = counts;
    } else {
        const TrigPolynomial poly = o.support.empty() ? io::poly_from_json(json_arg(o.poly))
                                                      : random_real_poly_with_zero_set(centered_rect(parse_sizes(o.support)), g.seed);
        if (!poly.is_real_valued(1e-12)) throw std::invalid_argument("sample needs a real-valued polynomial");
        cloud = o.n ? sample_zero_set(poly, o.n, mix_seed(g.seed, 1)) : PointCloud(poly.dims());
        poly_json = io::to_json(poly);
        if (!o.support.empty()) config["support"] = o.support;
        else config["poly"] = poly_json;
        config["n"] = o.n;
    }
    write_cloud(out_path(g, o.out), cloud);
    write_text(out_path(g, o.poly_out), poly_json.dump(2) + "\n");
    write_manifest(g, "sample", config, {o.out, o.poly_out});
    out << "wrote " << cloud.size() << " samples\n";
}

// -- recover ----------------------------------------------------------------

struct RecoverOpts {
    std::string cloud, gamma, lambda, out = "model.json", grid_out = "grid.csv";
    std::size_t grid = 64;
};

void for_each_grid_point(std::size_t dims, std::size_t res, const std::function<void(const Vector&)>& f) {
    std::vector<std::size_t> idx(dims, 0);
    Vector x(static_cast<Eigen::Index>(dims));
    for (;;) {
        for (std::size_t d = 0; d < dims; ++d)
            x[static_cast<Eigen::Index>(d)] = (static_cast<double>(idx[d]) + 0.5) / static_cast<double>(res);
        f(x);
        std::size_t d = 0;
        while (d < dims && ++idx[d] == res) idx[d++] = 0;
        if (d == dims) return;
    }
}

void cmd_recover(const Global& g, const RecoverOpts& o, std::ostream& out) {
    if (o.grid == 0) throw std::invalid_argument("--grid must be positive");
    const PointCloud cloud = io::read_cloud_csv(o.cloud);
    if (cloud.empty()) throw EmptyCloud();
    const std::size_t n = cloud.dims();
    const KernelConfig gamma_cfg = kernel_arg(o.gamma);
    const SupportSet gamma = support_of(gamma_cfg, n);
    json model{{"gamma", io::to_json(gamma_cfg)}};
    json config{{"cloud", o.cloud}, {"gamma", io::to_json(gamma_cfg)}, {"grid", o.grid}, {"out", o.out}, {"grid_out", o.grid_out}};

    std::optional<TrigPolynomial> poly;
    std::optional<SosSurface> sos;
    if (!o.lambda.empty()) {
        const KernelConfig lambda_cfg = kernel_arg(o.lambda);
        const SupportSet lambda = support_of(lambda_cfg, n);
        model["lambda"] = config["lambda"] = io::to_json(lambda_cfg);
        if (lambda == gamma) {
            poly = recover_minimal(cloud, lambda, g.tol);
        } else {
            model["expected_null_dim"] = shift_complement(gamma, lambda).size();
        }
    }
    if (!poly) {
        sos = recover_sos(cloud, gamma, g.tol);
        if (sos->basis().dim() == 0) throw NoAnnihilator();
        model["null_space"] = io::to_json(sos->basis());
        if (sos->basis().dim() == 1) {
            // a one-dimensional null space is the annihilator itself
            poly = TrigPolynomial(gamma, canonical_phase(sos->basis().vectors.col(0)));
        } else {
            model["sos"] = io::to_json(sos_as_polynomial(*sos));
        }
    }
    if (poly) model["poly"] = io::to_json(*poly);

    std::ostringstream grid;
    for (std::size_t d = 0; d < n; ++d) grid << 'x' << d + 1 << ',';
    grid << (poly ? "psi,abs_psi" : "gamma") << '\n';
    for_each_grid_point(n, o.grid, [&](const Vector& x) {
        for (Eigen::Index d = 0; d < x.size(); ++d) grid << io::format_double(x[d]) << ',';
        if (poly) {
            const Complex v = (*poly)(x);
            grid << io::format_double(v.real()) << ',' << io::format_double(std::abs(v)) << '\n';
        } else {
            grid << io::format_double((*sos)(x)) << '\n';
        }
    });
    write_text(out_path(g, o.out), model.dump(2) + "\n");
    write_text(out_path(g, o.grid_out), grid.str());
    write_manifest(g, "recover", config, {o.out, o.grid_out});
    out << (poly ? "recovered annihilating polynomial" : "recovered sum-of-squares surface") << " on " << gamma.size()
        << " frequencies\n";
}

// -- denoise ----------------------------------------------------------------

struct DenoiseOpts {
    std::string cloud, kernel, out = "clean.csv", log = "metrics.csv";
    IrlsConfig irls;
    std::optional<double> gamma0;
};

void cmd_denoise(const Global& g, DenoiseOpts o, std::ostream& out) {
    const PointCloud noisy = io::read_cloud_csv(o.cloud);
    o.irls.kernel = kernel_arg(o.kernel);
    o.irls.gamma0 = o.gamma0;
    const auto result = denoise(noisy, o.irls);
    PointCloud clean = result.cloud;
    if (noisy.has_labels()) clean = PointCloud(clean.points(), noisy.labels());
    write_cloud(out_path(g, o.out), clean);
    std::ostringstream log;
    io::write_denoise_log_csv(log, result.log);
    write_text(out_path(g, o.log), log.str());
    json config{{"cloud", o.cloud},   {"kernel", io::to_json(o.irls.kernel)}, {"lambda", o.irls.lambda},
                {"iters", o.irls.iterations}, {"eta", o.irls.eta},       {"gamma0", result.gamma0},
                {"inner", o.irls.inner},  {"step", o.irls.step},           {"out", o.out},
                {"log", o.log}};
    write_manifest(g, "denoise", config, {o.out, o.log});
    out << "denoised " << clean.size() << " points in " << result.log.size() << " iterations\n";
}

// -- fit-fn / eval-fn ---------------------------------------------------------

struct FitOpts {
    std::string train, anchors, kernel, out = "model.json", solver = "features";
    double cutoff = kDefaultPinvCutoff;
    double ridge = 0.0;
};

/// Splits a table with columns x1..xn, y1[,y1_im], y2[,y2_im], ... into inputs and targets.
void split_pairs(const io::Table& t, Matrix& x, CMatrix& y) {
    std::size_t n = 0;
    while (t.column("x" + std::to_string(n + 1)) >= 0) ++n;
    std::size_t m = 0;
    while (t.column("y" + std::to_string(m + 1)) >= 0) ++m;
    if (n == 0 || m == 0) throw ParseError("training CSV needs columns x1..xn and y1..ym", 1);
    const auto rows = static_cast<Eigen::Index>(t.rows.size());
    x.resize(static_cast<Eigen::Index>(n), rows);
    y.resize(static_cast<Eigen::Index>(m), rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = t.rows[static_cast<std::size_t>(r)];
        for (std::size_t d = 0; d < n; ++d) x(static_cast<Eigen::Index>(d), r) = row[static_cast<std::size_t>(t.column("x" + std::to_string(d + 1)))];
        for (std::size_t k = 0; k < m; ++k) {
            const auto name = "y" + std::to_string(k + 1);
            const auto im = t.column(name + "_im");
            y(static_cast<Eigen::Index>(k), r) = Complex(row[static_cast<std::size_t>(t.column(name))],
                                                         im >= 0 ? row[static_cast<std::size_t>(im)] : 0.0);
        }
    }
}

void cmd_fit(const Global& g, const FitOpts& o, std::ostream& out) {
    Matrix x;
    CMatrix y;
    split_pairs(io::read_table_csv(o.train), x, y);
    const PointCloud anchors = io::read_cloud_csv(o.anchors);
    const KernelConfig kernel = kernel_arg(o.kernel);
    const auto model = fit_outputs(x, y, PointCloud(anchors.points()), kernel, o.cutoff, o.ridge, io::parse_solver(o.solver));
    write_text(out_path(g, o.out), io::to_json(model).dump(2) + "\n");
    json config{{"train", o.train}, {"anchors", o.anchors}, {"kernel", io::to_json(kernel)},
                {"cutoff", o.cutoff}, {"ridge", o.ridge}, {"solver", o.solver}, {"out", o.out}};
    write_manifest(g, "fit-fn", config, {o.out});
    out << "fitted " << y.rows() << " outputs on " << anchors.size() << " anchors\n";
}

struct EvalOpts {
    std::string model, points, out = "values.csv";
};

void cmd_eval(const Global& g, const EvalOpts& o, std::ostream& out) {
    const auto model = io::anchor_model_from_json(io::read_json_file(o.model));
    const PointCloud pts = io::read_cloud_csv(o.points);
    if (pts.dims() != model.anchors().dims()) throw DimensionMismatch(model.anchors().dims(), pts.dims());
    const CMatrix vals = eval_batch(model, pts.points());
    std::ostringstream csv;
    for (std::size_t d = 0; d < pts.dims(); ++d) csv << 'x' << d + 1 << ',';
    for (Eigen::Index k = 0; k < vals.rows(); ++k) csv << (k ? "," : "") << 'y' << k + 1 << ",y" << k + 1 << "_im";
    csv << '\n';
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto p = pts.point(i);
        for (Eigen::Index d = 0; d < p.size(); ++d) csv << io::format_double(p[d]) << ',';
        for (Eigen::Index k = 0; k < vals.rows(); ++k) {
            const Complex v = vals(k, static_cast<Eigen::Index>(i));
            csv << (k ? "," : "") << io::format_double(v.real()) << ',' << io::format_double(v.imag());
        }
        csv << '\n';
    }
    write_text(out_path(g, o.out), csv.str());
    write_manifest(g, "eval-fn", json{{"model", o.model}, {"points", o.points}, {"out", o.out}}, {o.out});
    out << "evaluated " << pts.size() << " points\n";
}

// -- phase-transition -----------------------------------------------------------

struct PhaseOpts {
    std::string config, out = "table.csv";
    std::optional<std::size_t> trials, threads;
};

void cmd_phase(const Global& g, const PhaseOpts& o, std::ostream& out) {
    const json j = json_arg(o.config);
    PhaseConfig c;
    for (const auto& f : j.at("factors")) c.factors.push_back(support_from_json_or_size(f));
    if (j.contains("gamma")) c.gamma = support_from_json_or_size(j.at("gamma"));
    c.trials = j.value("trials", c.trials);
    c.sample_counts = j.value("sample_counts", c.sample_counts);
    c.component_counts = j.value("component_counts", c.component_counts);
    c.seed = j.value("seed", c.seed);
    c.tol = j.value("tol", c.tol);
    c.residual_tol = j.value("residual_tol", c.residual_tol);
    c.heldout_per_factor = j.value("heldout_per_factor", c.heldout_per_factor);
    c.threads = j.value("threads", c.threads);
    if (g.seed_given) c.seed = g.seed;
    if (g.tol_given) c.tol = g.tol;
    if (o.trials) c.trials = *o.trials;
    if (o.threads) c.threads = *o.threads;

    const auto rows = phase_transition(c);
    std::ostringstream csv;
    io::write_phase_table_csv(csv, rows);
    write_text(out_path(g, o.out), csv.str());

    json factors = json::array();
    for (const auto& f : c.factors) factors.push_back(io::to_json(f));
    json resolved{{"factors", factors},
                  {"trials", c.trials},
                  {"sample_counts", c.sample_counts},
                  {"component_counts", c.component_counts},
                  {"seed", c.seed},
                  {"tol", c.tol},
                  {"residual_tol", c.residual_tol},
                  {"heldout_per_factor", c.heldout_per_factor},
                  {"out", o.out}};
    if (c.gamma) resolved["gamma"] = io::to_json(*c.gamma);
    Global manifest_g = g;
    manifest_g.seed = c.seed;
    manifest_g.tol = c.tol;
    write_manifest(manifest_g, "phase-transition", resolved, {o.out});
    for (const auto& r : rows) out << "N=" << r.total << " success " << r.successes << "/" << r.trials << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Band-limited level-set surface recovery from point samples"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Global g;
    auto* seed_opt = app.add_option("--seed", g.seed, "Master random seed");
    app.add_option("--out-dir", g.out_dir, "Directory for outputs and manifest.json");
    auto* tol_opt = app.add_option("--tol", g.tol, "Relative singular-value cut for null spaces");

    SampleOpts so;
    auto* sample = app.add_subcommand("sample", "Sample points on the zero set of a random or given polynomial");
    sample->add_option("--support", so.support, "Centered support of a random real polynomial, e.g. 3x3");
    sample->add_option("--poly", so.poly, "Polynomial JSON (file or inline)");
    sample->add_option("--product", so.product, "Comma-separated factor supports, e.g. 3x3,3x3");
    sample->add_option("--per-component", so.per_component, "Comma-separated sample counts per factor");
    sample->add_option("--n", so.n, "Number of samples");
    sample->add_option("--out", so.out, "Cloud CSV");
    sample->add_option("--poly-out", so.poly_out, "Generating polynomial JSON");

    RecoverOpts ro;
    auto* recover = app.add_subcommand("recover", "Recover the annihilating polynomial or SoS surface");
    recover->add_option("--cloud", ro.cloud, "Cloud CSV")->required();
    recover->add_option("--gamma", ro.gamma, "Lifting support config (JSON file, inline JSON, or 3x3)")->required();
    recover->add_option("--lambda", ro.lambda, "Minimal support of the surface, if known");
    recover->add_option("--out", ro.out, "Model JSON");
    recover->add_option("--grid", ro.grid, "Grid points per axis for the evaluation CSV");
    recover->add_option("--grid-out", ro.grid_out, "Grid evaluation CSV");

    DenoiseOpts dn;
    auto* den = app.add_subcommand("denoise", "Kernel low-rank IRLS denoising of a noisy cloud");
    den->add_option("--cloud", dn.cloud, "Noisy cloud CSV")->required();
    den->add_option("--kernel", dn.kernel, "Kernel support config")->required();
    den->add_option("--lambda", dn.irls.lambda, "Regularization weight");
    den->add_option("--iters", dn.irls.iterations, "Outer iterations");
    den->add_option("--eta", dn.irls.eta, "Shrink factor for gamma");
    den->add_option("--gamma0", dn.gamma0, "Initial gamma (default 0.01 * largest Gram eigenvalue)");
    den->add_option("--inner", dn.irls.inner, "Gradient steps per outer iteration");
    den->add_option("--step", dn.irls.step, "Initial gradient step");
    den->add_option("--out", dn.out, "Denoised cloud CSV");
    den->add_option("--log", dn.log, "Per-iteration metrics CSV");

    FitOpts fo;
    auto* fit = app.add_subcommand("fit-fn", "Learn anchor outputs F from training pairs");
    fit->add_option("--train", fo.train, "CSV with x1..xn, y1[,y1_im], ...")->required();
    fit->add_option("--anchors", fo.anchors, "Anchor cloud CSV")->required();
    fit->add_option("--kernel", fo.kernel, "Kernel support config")->required();
    fit->add_option("--cutoff", fo.cutoff, "Relative pseudo-inverse cutoff");
    fit->add_option("--ridge", fo.ridge, "Ridge added before the pseudo-inverse");
    fit->add_option("--solver", fo.solver, "features (SVD of the anchor lift) or kernel (pseudo-inverse of K(A))");
    fit->add_option("--out", fo.out, "Model JSON");

    EvalOpts eo;
    auto* ev = app.add_subcommand("eval-fn", "Evaluate an anchor model at query points");
    ev->add_option("--model", eo.model, "Model JSON")->required();
    ev->add_option("--points", eo.points, "Query cloud CSV")->required();
    ev->add_option("--out", eo.out, "Values CSV");

    PhaseOpts po;
    auto* phase = app.add_subcommand("phase-transition", "Monte Carlo recovery success vs sample count");
    phase->add_option("--config", po.config, "Experiment JSON (file or inline)")->required();
    phase->add_option("--out", po.out, "Table CSV");
    phase->add_option("--trials", po.trials, "Override the trial count");
    phase->add_option("--threads", po.threads, "Worker threads (0 = all cores)");

    for (auto* sub : {sample, recover, den, fit, ev, phase}) sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = e.get_exit_code();
        if (code == 0) {
            out << (e.get_name() == "CallForVersion" ? std::string(kVersion) + "\n" : app.help());
            return kOk;
        }
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    g.seed_given = seed_opt->count() > 0;
    g.tol_given = tol_opt->count() > 0;

    try {
        fs::create_directories(g.out_dir);
        if (sample->parsed()) cmd_sample(g, so, out);
        else if (recover->parsed()) cmd_recover(g, ro, out);
        else if (den->parsed()) cmd_denoise(g, dn, out);
        else if (fit->parsed()) cmd_fit(g, fo, out);
        else if (ev->parsed()) cmd_eval(g, eo, out);
        else if (phase->parsed()) cmd_phase(g, po, out);
        return kOk;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kDomain;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        // parse errors, bad arguments, unreadable files
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

} // namespace bandsurf::cli
