// knotgeo: conformal knot-energy toolkit CLI.
//
// Subcommands: generate, energy, invariance, crossratio-grid, spheres,
// symplectic-check, relax. Every command writes its outputs next to a
// RunManifest recording inputs, parameters, and versions.
//
// Exit codes: 0 ok, 1 usage, 2 input parse, 3 numeric precondition,
// 4 flow abort.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "knotgeo/conformal.hpp"
#include "knotgeo/curve.hpp"
#include "knotgeo/energy.hpp"
#include "knotgeo/flow.hpp"
#include "knotgeo/generators.hpp"
#include "knotgeo/io.hpp"
#include "knotgeo/minkowski.hpp"
#include "knotgeo/moebius.hpp"
#include "knotgeo/symplectic.hpp"
#include "knotgeo/types.hpp"

namespace fs = std::filesystem;
using namespace knotgeo;
using clock_type = std::chrono::steady_clock;

namespace {

struct GlobalOpts {
    int threads = 0;   // 0 = KNOT_THREADS env or 1
    bool det = false;  // deterministic output mode
};

void write_manifest(const RunManifest& m, const std::string& beside) {
    write_json(beside + ".manifest.json", m.to_json());
}

std::vector<double> parse_csv_numbers(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

MatX load_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open matrix CSV '" + path + "'", 0);
    std::string line;
    std::vector<std::vector<double>> rows;
    int lineno = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (header) {  // mandatory header row
            header = false;
            continue;
        }
        try {
            rows.push_back(parse_csv_numbers(line));
        } catch (const std::exception&) {
            throw parse_error("bad matrix row", lineno);
        }
    }
    if (rows.empty()) throw parse_error("matrix CSV has no data rows", lineno);
    MatX A(rows.size(), rows[0].size());
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
            throw parse_error("ragged matrix CSV", static_cast<int>(r + 2));
        for (size_t c = 0; c < rows[r].size(); ++c) A(r, c) = rows[r][c];
    }
    return A;
}

void save_matrix_csv(const std::string& path, const MatX& A) {
    std::vector<std::string> header;
    for (int c = 0; c < A.cols(); ++c) header.push_back("c" + std::to_string(c));
    CsvWriter csv(path, header);
    for (int r = 0; r < A.rows(); ++r) {
        std::vector<double> row(A.cols());
        for (int c = 0; c < A.cols(); ++c) row[c] = A(r, c);
        csv.row(row);
    }
}

json blade_to_json(const Blade& b) {
    const auto combs = combinations(b.ambient_dim(), b.grade());
    std::vector<std::string> legend;
    for (const auto& I : combs) {
        std::string s;
        for (int idx : I) s += std::to_string(idx);
        legend.push_back(s);
    }
    std::vector<double> coords(b.coords.data(), b.coords.data() + b.coords.size());
    return json{{"q", b.q}, {"n", b.n}, {"legend", legend}, {"coords", coords}};
}

Blade blade_from_json(const json& doc) {
    Blade b;
    b.q = doc.at("q").get<int>();
    b.n = doc.at("n").get<int>();
    const auto coords = doc.at("coords").get<std::vector<double>>();
    if (static_cast<int>(coords.size()) != b.coord_count())
        throw std::domain_error("blade JSON: wrong coordinate count");
    b.coords = Eigen::Map<const VecX>(coords.data(), coords.size());
    return b;
}

Blade load_blade(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open blade JSON '" + path + "'", 0);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw parse_error(std::string("bad blade JSON: ") + e.what(), 0);
    }
    return blade_from_json(doc);
}

// -------------------------------------------------------------------------

int cmd_generate(const std::string& shape, int n, double radius, double a, double b, int p,
                 int q, std::uint64_t seed, double amplitude, double gap,
                 const std::string& out, const GlobalOpts& g) {
    const auto t0 = clock_type::now();
    PolyCurve c = [&]() {
        if (shape == "circle") return make_circle(n, radius);
        if (shape == "ellipse") return make_ellipse(n, a, b);
        if (shape == "torus") return make_torus_knot(n, p, q);
        if (shape == "trefoil") return make_trefoil(n);
        if (shape == "perturbed-circle") return make_perturbed_circle(n, seed, amplitude);
        if (shape == "clasp") return make_clasp(n, gap);
        throw std::invalid_argument("unknown shape '" + shape + "'");
    }();
    save_knot(out, c);
    RunManifest m;
    m.command = "generate";
    m.parameters = {{"shape", shape}, {"n", n},       {"radius", radius},
                    {"a", a},         {"b", b},       {"p", p},
                    {"q", q},         {"seed", seed}, {"amplitude", amplitude},
                    {"gap", gap}};
    m.outputs = {out};
    m.deterministic = g.det;
    m.wall_time_s = std::chrono::duration<double>(clock_type::now() - t0).count();
    write_manifest(m, out);
    return 0;
}

int cmd_energy(const std::string& input, double alpha, const std::string& formula, int resample,
               const std::string& out, const GlobalOpts& g) {
    const auto t0 = clock_type::now();
    PolyCurve c = load_knot(input);
    if (resample > 0) c = c.resample_uniform(resample);
    EnergyReport rep;
    if (formula == "renorm") {
        rep = energy_alpha(c, alpha, g.threads);
    } else if (formula == "cosine") {
        rep = energy_cosine(c, g.threads);
    } else if (formula == "open") {
        rep = energy_open(c, g.threads);
    } else if (formula == "sphere") {
        rep = energy_sphere(lift_curve(c), alpha, g.threads);
    } else {
        throw std::invalid_argument("unknown formula '" + formula + "'");
    }
    write_json(out, report_to_json(rep));
    std::cout << report_to_json(rep).dump(2) << "\n";
    RunManifest m;
    m.command = "energy";
    m.inputs = {input};
    m.parameters = {{"alpha", alpha}, {"formula", formula}, {"n", resample}};
    m.outputs = {out};
    m.deterministic = g.det;
    m.wall_time_s = std::chrono::duration<double>(clock_type::now() - t0).count();
    write_manifest(m, out);
    return 0;
}

int cmd_invariance(const std::string& input, const std::vector<std::string>& inversions,
                   int resample, const std::string& out, const GlobalOpts& g) {
    const auto t0 = clock_type::now();
    PolyCurve c = load_knot(input);
    if (resample > 0) c = c.resample_uniform(resample);
    MoebiusMap map;
    for (const auto& spec : inversions) {
        const auto vals = parse_csv_numbers(spec);
        if (vals.size() != 4) throw std::invalid_argument("--invert expects cx,cy,cz,r");
        map.emplace_back(Vec3(vals[0], vals[1], vals[2]), vals[3]);
    }
    const EnergyReport before = energy_alpha(c, 2.0, g.threads);
    const PolyCurve image = apply_map(map, c);
    const EnergyReport after = energy_alpha(image, 2.0, g.threads);
    const double denom = std::max(1.0, std::abs(before.value));
    const double rel = std::abs(after.value - before.value) / denom;
    const double tolerance = 1e-2;
    json doc{{"energy_before", before.value},
             {"energy_after", after.value},
             {"rel_diff", rel},
             {"tolerance", tolerance},
             {"pass", rel <= tolerance},
             {"n", before.n},
             {"inversions", inversions}};
    write_json(out, doc);
    std::cout << doc.dump(2) << "\n";
    RunManifest m;
    m.command = "invariance";
    m.inputs = {input};
    m.parameters = {{"invert", inversions}, {"n", resample}};
    m.outputs = {out};
    m.deterministic = g.det;
    m.wall_time_s = std::chrono::duration<double>(clock_type::now() - t0).count();
    write_manifest(m, out);
    return 0;
}

int cmd_crossratio(const std::string& input, int stride, int resample, const std::string& out,
                   const GlobalOpts& g) {
    const auto t0 = clock_type::now();
    PolyCurve c0 = load_knot(input);
    if (resample > 0) c0 = c0.resample_uniform(resample);
    const PolyCurve c = c0.resample_uniform(c0.size());
    if (stride < 1) throw std::invalid_argument("--stride must be >= 1");
    const int n = c.size();
    const double L = c.total_length();

    CsvWriter csv(out, {"i", "j", "arclen_i", "arclen_j", "abs", "theta", "re", "im"});
    double sum_abs_minus_re = 0.0;
    const double w = static_cast<double>(stride) / n;  // unit-length weight per sample
    for (int i = 0; i < n; i += stride)
        for (int j = 0; j < n; j += stride) {
            if (i == j) continue;
            const CrossRatioSample s = cross_ratio_sample(c, i, j);
            csv.row_prefixed(
                i, j,
                {c.arclen(i), c.arclen(j), s.absDensity, s.theta, s.reDensity, s.imDensity});
            sum_abs_minus_re += (s.absDensity - s.reDensity) * (L * L) * w * w;
        }
    csv.comment("sum_abs_minus_re = " + format_double(sum_abs_minus_re));
    RunManifest m;
    m.command = "crossratio-grid";
    m.inputs = {input};
    m.parameters = {{"stride", stride}, {"n", resample}};
    m.outputs = {out};
    m.deterministic = g.det;
    m.wall_time_s = std::chrono::duration<double>(clock_type::now() - t0).count();
    write_manifest(m, out);
    return 0;
}

int cmd_symplectic(const std::string& input, int stride, int resample, const std::string& out,
                   const GlobalOpts& g) {
    const auto t0 = clock_type::now();
    PolyCurve c0 = load_knot(input);
    if (resample > 0) c0 = c0.resample_uniform(resample);
    const PolyCurve c = c0.resample_uniform(c0.size());
    if (stride < 1) throw std::invalid_argument("--stride must be >= 1");
    const int n = c.size();
    CsvWriter csv(out, {"i", "j", "pullback_density", "re_density", "rel_err"});
    for (int i = 0; i < n; i += stride)
        for (int j = 0; j < n; j += stride) {
            const int sep = std::min((j - i + n) % n, (i - j + n) % n);
            if (sep < 3) continue;
            const double dens = canonical_form_pullback(c, i, j);
            const CrossRatioSample s = cross_ratio_sample(c, i, j);
            const double rel = std::abs(-0.5 * dens - s.reDensity) / s.absDensity;
            csv.row_prefixed(i, j, {dens, s.reDensity, rel});
        }
    RunManifest m;
    m.command = "symplectic-check";
    m.inputs = {input};
    m.parameters = {{"stride", stride}, {"n", resample}};
    m.outputs = {out};
    m.deterministic = g.det;
    m.wall_time_s = std::chrono::duration<double>(clock_type::now() - t0).count();
    write_manifest(m, out);
    return 0;
}

int cmd_relax(const std::string& input, const FlowConfig& cfg, const std::string& outdir,
              const GlobalOpts& g) {
    const auto t0 = clock_type::now();
    PolyCurve c = load_knot(input);
    fs::create_directories(outdir);

    json cfgdoc{{"alpha", cfg.alpha},
                {"step_init", cfg.step_init},
                {"max_steps", cfg.max_steps},
                {"grad_tol", cfg.grad_tol},
                {"resample_every", cfg.resample_every},
                {"min_self_dist_factor", cfg.min_self_dist_factor}};
    write_json(outdir + "/config.json", cfgdoc);

    std::vector<std::string> outputs = {outdir + "/config.json", outdir + "/trace.csv",
                                        outdir + "/final.knot", outdir + "/result.json"};
    int checkpoint_count = 0;
    const FlowTrace trace = relax(c, cfg, [&](int accepted, const PolyCurve& cur) {
        if (accepted % 100 == 0) {
            char name[64];
            std::snprintf(name, sizeof(name), "/checkpoint_%06d.knot", accepted);
            save_knot(outdir + name, cur);
            outputs.push_back(outdir + name);
            ++checkpoint_count;
        }
    });

    CsvWriter csv(outdir + "/trace.csv",
                  {"step", "energy", "stepsize", "gradnorm", "minselfdist", "resample"});
    for (const auto& s : trace.steps)
        csv.row({static_cast<double>(s.step), s.energy, s.step_size, s.grad_norm,
                 s.min_self_dist, s.resample ? 1.0 : 0.0});

    save_knot(outdir + "/final.knot", trace.final_curve());

    json result{{"status", to_string(trace.status)},
                {"accepted_steps", trace.accepted_steps},
                {"final_energy", trace.steps.back().energy},
                {"checkpoints", checkpoint_count}};
    write_json(outdir + "/result.json", result);

    RunManifest m;
    m.command = "relax";
    m.inputs = {input};
    m.parameters = cfgdoc;
    m.outputs = outputs;
    m.deterministic = g.det;
    m.wall_time_s = std::chrono::duration<double>(clock_type::now() - t0).count();
    write_json(outdir + "/manifest.json", m.to_json());

    std::cout << result.dump(2) << "\n";
    return trace.status == FlowStatus::aborted_self_distance ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knotgeo: Moebius-invariant knot energies and conformal geometry"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--threads", g.threads, "worker threads (default: KNOT_THREADS or 1)");
    app.add_flag("--det", g.det, "deterministic output mode (byte-identical reruns)");

    auto* gen = app.add_subcommand("generate", "write a built-in generator curve as a knot file");
    std::string gen_shape, gen_out = "out.knot";
    int gen_n = 256, gen_p = 2, gen_q = 3;
    double gen_radius = 1.0, gen_a = 2.0, gen_b = 1.0, gen_amp = 0.1, gen_gap = 0.05;
    std::uint64_t gen_seed = 1;
    gen->add_option("shape", gen_shape,
                    "circle | ellipse | torus | trefoil | perturbed-circle | clasp")
        ->required();
    gen->add_option("--n", gen_n, "vertex count");
    gen->add_option("--radius", gen_radius, "circle radius");
    gen->add_option("--a", gen_a, "ellipse semi-axis a");
    gen->add_option("--b", gen_b, "ellipse semi-axis b");
    gen->add_option("--p", gen_p, "torus knot p");
    gen->add_option("--q", gen_q, "torus knot q");
    gen->add_option("--seed", gen_seed, "perturbation seed");
    gen->add_option("--amplitude", gen_amp, "perturbation amplitude");
    gen->add_option("--gap", gen_gap, "clasp gap as a fraction of total length");
    gen->add_option("-o,--out", gen_out, "output knot file");

    auto* en = app.add_subcommand("energy", "evaluate a knot energy and write a JSON report");
    std::string en_input, en_formula = "renorm", en_out = "energy.json";
    double en_alpha = 2.0;
    int en_n = 0;
    en->add_option("input", en_input, "knot file")->required();
    en->add_option("--alpha", en_alpha, "energy exponent in (0,3)");
    en->add_option("--formula", en_formula, "renorm | cosine | sphere | open");
    en->add_option("--n", en_n, "resample to n vertices before evaluating");
    en->add_option("-o,--out", en_out, "report path");

    auto* inv =
        app.add_subcommand("invariance", "compare the energy before/after sphere inversions");
    std::string inv_input, inv_out = "invariance.json";
    std::vector<std::string> inv_specs;
    int inv_n = 0;
    inv->add_option("input", inv_input, "knot file")->required();
    inv->add_option("--invert", inv_specs, "inversion as cx,cy,cz,r (repeatable)");
    inv->add_option("--n", inv_n, "resample to n vertices");
    inv->add_option("-o,--out", inv_out, "report path");

    auto* cr = app.add_subcommand("crossratio-grid",
                                  "emit the infinitesimal cross ratio over the pair grid");
    std::string cr_input, cr_out = "crossratio.csv";
    int cr_stride = 1, cr_n = 0;
    cr->add_option("input", cr_input, "knot file")->required();
    cr->add_option("--stride", cr_stride, "pair subsampling stride");
    cr->add_option("--n", cr_n, "resample to n vertices");
    cr->add_option("-o,--out", cr_out, "CSV path");

    auto* sy = app.add_subcommand("symplectic-check",
                                  "compare the symplectic pullback against Re Omega");
    std::string sy_input, sy_out = "symplectic.csv";
    int sy_stride = 16, sy_n = 0;
    sy->add_option("input", sy_input, "knot file")->required();
    sy->add_option("--stride", sy_stride, "pair subsampling stride");
    sy->add_option("--n", sy_n, "resample to n vertices");
    sy->add_option("-o,--out", sy_out, "CSV path");

    auto* sp = app.add_subcommand("spheres", "Minkowski sphere-space utilities");
    sp->require_subcommand(1);
    auto* sp_wedge = sp->add_subcommand("wedge", "wedge vectors from JSON into a blade");
    std::string spw_in, spw_out = "blade.json";
    sp_wedge->add_option("--in", spw_in, "JSON {\"vectors\": [[...], ...]}")->required();
    sp_wedge->add_option("-o,--out", spw_out, "blade JSON");
    auto* sp_pnorm = sp->add_subcommand("pnorm", "pseudonorm of a blade");
    std::string spp_in, spp_out = "pnorm.json";
    sp_pnorm->add_option("--in", spp_in, "blade JSON")->required();
    sp_pnorm->add_option("-o,--out", spp_out, "output JSON");
    auto* sp_pl = sp->add_subcommand("plucker-check", "Pluecker relation residual of a blade");
    std::string spl_in, spl_out = "plucker.json";
    sp_pl->add_option("--in", spl_in, "blade JSON")->required();
    sp_pl->add_option("-o,--out", spl_out, "output JSON");
    auto* sp_psi = sp->add_subcommand("psi", "compound matrix of A on the blade space");
    std::string psi_in, psi_out = "psi.csv";
    int psi_q = 0, psi_n = 3;
    sp_psi->add_option("--in", psi_in, "matrix CSV (row-major, header row)")->required();
    sp_psi->add_option("--q", psi_q, "sphere dimension q");
    sp_psi->add_option("--sphere-n", psi_n, "ambient sphere dimension n");
    sp_psi->add_option("-o,--out", psi_out, "output CSV");
    auto* sp_smap = sp->add_subcommand("smap", "0-sphere blade of two S^3 points");
    std::string smap_x, smap_y, smap_out = "smap.json";
    sp_smap->add_option("--x", smap_x, "x1,x2,x3,x4 on S^3")->required();
    sp_smap->add_option("--y", smap_y, "y1,y2,y3,y4 on S^3")->required();
    sp_smap->add_option("-o,--out", smap_out, "blade JSON");
    auto* sp_area = sp->add_subcommand("area", "signed area sum of s(C1 x C2) for a 2-link");
    std::string area_in, area_out = "area.json";
    sp_area->add_option("--link", area_in, "link manifest JSON")->required();
    sp_area->add_option("-o,--out", area_out, "output JSON");

    auto* rx = app.add_subcommand("relax", "gradient-descent energy relaxation");
    std::string rx_input, rx_out = "relax_run";
    FlowConfig cfg;
    rx->add_option("input", rx_input, "knot file")->required();
    rx->add_option("--alpha", cfg.alpha, "energy exponent");
    rx->add_option("--step-init", cfg.step_init, "initial step size");
    rx->add_option("--max-steps", cfg.max_steps, "maximum accepted steps");
    rx->add_option("--grad-tol", cfg.grad_tol, "gradient sup-norm stop tolerance");
    rx->add_option("--resample-every", cfg.resample_every, "resample cadence (accepted steps)");
    rx->add_option("--min-self-dist-factor", cfg.min_self_dist_factor,
                   "abort threshold as a multiple of L/n");
    rx->add_option("-o,--out", rx_out, "run directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed())
            return cmd_generate(gen_shape, gen_n, gen_radius, gen_a, gen_b, gen_p, gen_q,
                                gen_seed, gen_amp, gen_gap, gen_out, g);
        if (en->parsed()) return cmd_energy(en_input, en_alpha, en_formula, en_n, en_out, g);
        if (inv->parsed()) return cmd_invariance(inv_input, inv_specs, inv_n, inv_out, g);
        if (cr->parsed()) return cmd_crossratio(cr_input, cr_stride, cr_n, cr_out, g);
        if (sy->parsed()) return cmd_symplectic(sy_input, sy_stride, sy_n, sy_out, g);
        if (rx->parsed()) return cmd_relax(rx_input, cfg, rx_out, g);
        if (sp->parsed()) {
            const auto t0 = clock_type::now();
            RunManifest m;
            m.command = "spheres";
            m.deterministic = g.det;
            if (sp_wedge->parsed()) {
                std::ifstream in(spw_in);
                if (!in) throw parse_error("cannot open '" + spw_in + "'", 0);
                json doc;
                try {
                    in >> doc;
                } catch (const json::exception& e) {
                    throw parse_error(std::string("bad vectors JSON: ") + e.what(), 0);
                }
                std::vector<VecX> vecs;
                for (const auto& row : doc.at("vectors")) {
                    const auto vals = row.get<std::vector<double>>();
                    vecs.push_back(Eigen::Map<const VecX>(vals.data(), vals.size()));
                }
                const Blade b = wedge(vecs);
                write_json(spw_out, blade_to_json(b));
                m.inputs = {spw_in};
                m.outputs = {spw_out};
                m.wall_time_s = std::chrono::duration<double>(clock_type::now() - t0).count();
                write_manifest(m, spw_out);
                return 0;
            }
            if (sp_pnorm->parsed()) {
                const Blade b = load_blade(spp_in);
                json doc{{"pnorm", blade_inner(b, b)}};
                write_json(spp_out, doc);
                std::cout << doc.dump(2) << "\n";
                m.inputs = {spp_in};
                m.outputs = {spp_out};
                m.wall_time_s = std::chrono::duration<double>(clock_type::now() - t0).count();
                write_manifest(m, spp_out);
                return 0;
            }
            if (sp_pl->parsed()) {
                const Blade b = load_blade(spl_in);
                json doc{{"residual", plucker_residual(b)}};
                write_json(spl_out, doc);
                std::cout << doc.dump(2) << "\n";
                m.inputs = {spl_in};
                m.outputs = {spl_out};
                m.wall_time_s = std::chrono::duration<double>(clock_type::now() - t0).count();
                write_manifest(m, spl_out);
                return 0;
            }
            if (sp_psi->parsed()) {
                const MatX A = load_matrix_csv(psi_in);
                if (A.rows() != psi_n + 2 || A.cols() != psi_n + 2)
                    throw std::domain_error("psi: matrix shape must be (n+2) x (n+2)");
                save_matrix_csv(psi_out, psi_matrix(A, psi_q, psi_n));
                m.inputs = {psi_in};
                m.outputs = {psi_out};
                m.parameters = {{"q", psi_q}, {"n", psi_n}};
                m.wall_time_s = std::chrono::duration<double>(clock_type::now() - t0).count();
                write_manifest(m, psi_out);
                return 0;
            }
            if (sp_smap->parsed()) {
                const auto xv = parse_csv_numbers(smap_x);
                const auto yv = parse_csv_numbers(smap_y);
                if (xv.size() != 4 || yv.size() != 4)
                    throw std::invalid_argument("smap: points must have 4 components");
                const Blade b =
                    s_map(Vec4(xv[0], xv[1], xv[2], xv[3]), Vec4(yv[0], yv[1], yv[2], yv[3]));
                write_json(smap_out, blade_to_json(b));
                m.outputs = {smap_out};
                m.wall_time_s = std::chrono::duration<double>(clock_type::now() - t0).count();
                write_manifest(m, smap_out);
                return 0;
            }
            if (sp_area->parsed()) {
                const LinkSet link = load_link_manifest(area_in);
                if (link.count() != 2) throw std::domain_error("area: need a 2-component link");
                const PolyCurve& a = link.component(0);
                const PolyCurve& b = link.component(1);
                const double wa = a.total_length() / a.size();
                const double wb = b.total_length() / b.size();
                double signed_sum = 0.0, abs_sum = 0.0;
                for (int i = 0; i < a.size(); ++i)
                    for (int j = 0; j < b.size(); ++j) {
                        const double d = signed_area_density(a, i, b, j);
                        signed_sum += d * wa * wb;
                        abs_sum += std::abs(d) * wa * wb;
                    }
                json doc{{"signed_sum", signed_sum},
                         {"abs_sum", abs_sum},
                         {"ratio", abs_sum > 0 ? std::abs(signed_sum) / abs_sum : 0.0}};
                write_json(area_out, doc);
                std::cout << doc.dump(2) << "\n";
                m.inputs = {area_in};
                m.outputs = {area_out};
                m.wall_time_s = std::chrono::duration<double>(clock_type::now() - t0).count();
                write_manifest(m, area_out);
                return 0;
            }
        }
    } catch (const parse_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "numeric precondition: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "numeric precondition: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
