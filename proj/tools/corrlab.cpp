// corrlab: generate, analyze, classify and sweep (2,2,2) behaviors.
//
// Exit codes: classify encodes the tier (0 Local, 10 QuantumCompatible,
// 20 NoSignalling, 30 Signalling); 2 bad parameters or malformed input,
// 3 write failure, 4 internal consistency failure.

#include <array>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corrlab/corrlab.hpp"

namespace {

using namespace corrlab;

constexpr double kDeg = std::numbers::pi / 180.0;

struct WriteFailure {
    std::string what;
};

void save_or_fail(const json& doc, const std::string& path) {
    try {
        save_json(doc, path);
    } catch (const std::exception& e) {
        throw WriteFailure{e.what()};
    }
}

std::array<double, 4> parse_angles(const std::string& csv) {
    std::array<double, 4> out{};
    size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        const size_t next = i < 3 ? csv.find(',', pos) : csv.size();
        if (next == std::string::npos)
            throw CLI::ValidationError("--angles", "expected 4 comma-separated degrees, got '" + csv + "'");
        const std::string tok = csv.substr(pos, next - pos);
        try {
            size_t used = 0;
            out[i] = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--angles", "'" + tok + "' is not a number");
        }
        pos = next + 1;
    }
    return out;
}

Behavior planar_behavior(const QuantumState& state, const std::array<double, 4>& angles_deg) {
    return two_qubit_behavior(state, MeasurementDirection::planar(angles_deg[0] * kDeg),
                              MeasurementDirection::planar(angles_deg[1] * kDeg),
                              MeasurementDirection::planar(angles_deg[2] * kDeg),
                              MeasurementDirection::planar(angles_deg[3] * kDeg));
}

// Raw moments without the validity gate, so analyze can still report on
// behaviors whose diagnostics are non-empty.
struct RawMoments {
    double e[2][2], ma[2][2], mb[2][2];
};

RawMoments raw_moments(const Behavior& b) {
    RawMoments m{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int ia = 0; ia < 2; ++ia)
                for (int ib = 0; ib < 2; ++ib) {
                    const int a = index_outcome(ia), bb = index_outcome(ib);
                    const double p = b.at_index(x, y, ia, ib);
                    m.e[x][y] += a * bb * p;
                    m.ma[x][y] += a * p;
                    m.mb[x][y] += bb * p;
                }
    return m;
}

int run_analyze(const std::string& path, bool as_json) {
    const Behavior b = load_behavior(path);
    const auto issues = validate(b);
    const RawMoments m = raw_moments(b);
    CorrelatorTable table{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            table.e[x][y] = m.e[x][y];
            table.ma[x][y] = m.ma[x][y];
            table.mb[x][y] = m.mb[x][y];
        }
    const ChshValues chsh = chsh_all(table);

    std::array<std::array<std::optional<double>, 2>, 2> r{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const double va = 1.0 - m.ma[x][y] * m.ma[x][y];
            const double vb = 1.0 - m.mb[x][y] * m.mb[x][y];
            if (va > 1e-12 && vb > 1e-12)
                r[x][y] = (m.e[x][y] - m.ma[x][y] * m.mb[x][y]) / (std::sqrt(va) * std::sqrt(vb));
        }

    double ns_max = 0.0;
    std::optional<NsReport> ns;
    if (issues.empty()) {
        ns = ns_residual(b);
        ns_max = ns->max_residual;
    } else {
        // residuals straight from the table, invalid or not
        for (int x = 0; x < 2; ++x)
            for (int ia = 0; ia < 2; ++ia) {
                double m0 = 0.0, m1 = 0.0;
                for (int ib = 0; ib < 2; ++ib) {
                    m0 += b.at_index(x, 0, ia, ib);
                    m1 += b.at_index(x, 1, ia, ib);
                }
                ns_max = std::max(ns_max, std::abs(m0 - m1));
            }
        for (int y = 0; y < 2; ++y)
            for (int ib = 0; ib < 2; ++ib) {
                double m0 = 0.0, m1 = 0.0;
                for (int ia = 0; ia < 2; ++ia) {
                    m0 += b.at_index(0, y, ia, ib);
                    m1 += b.at_index(1, y, ia, ib);
                }
                ns_max = std::max(ns_max, std::abs(m0 - m1));
            }
    }

    if (as_json) {
        json out{{"file", path},
                 {"validation", json::array()},
                 {"s_max", chsh.s_max},
                 {"chsh", chsh.values},
                 {"ns_residual", ns_max}};
        for (const auto& i : issues) out["validation"].push_back(i.describe());
        json ctxs = json::array();
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                json c{{"x", x},          {"y", y},
                       {"e", m.e[x][y]},  {"ma", m.ma[x][y]},
                       {"mb", m.mb[x][y]}, {"r", nullptr}};
                if (r[x][y]) c["r"] = *r[x][y];
                ctxs.push_back(std::move(c));
            }
        out["contexts"] = std::move(ctxs);
        std::printf("%s\n", out.dump(2).c_str());
        return 0;
    }

    std::printf("file: %s\n", path.c_str());
    if (issues.empty()) {
        std::printf("validation: OK\n");
    } else {
        std::printf("validation: %zu issue(s)\n", issues.size());
        for (const auto& i : issues) std::printf("  - %s\n", i.describe().c_str());
    }
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            std::printf("context (x=%d,y=%d): E = %.12g  <A> = %.12g  <B> = %.12g  r = ", x, y,
                        m.e[x][y], m.ma[x][y], m.mb[x][y]);
            if (r[x][y])
                std::printf("%.12g\n", *r[x][y]);
            else
                std::printf("undefined (deterministic marginal)\n");
        }
    std::printf("chsh (minus at 00,01,10,11; both signs):");
    for (double v : chsh.values) std::printf(" %.12g", v);
    std::printf("\ns_max = %.12g\n", chsh.s_max);
    std::printf("ns residual (max) = %.12g\n", ns_max);
    if (ns) {
        const NsConstraint* worst = &ns->per_constraint.front();
        for (const auto& c : ns->per_constraint)
            if (c.residual > worst->residual) worst = &c;
        std::printf("  worst constraint: party %c, setting %d, outcome %+d, contexts (%d,%d) vs (%d,%d)\n",
                    worst->party, worst->setting, worst->outcome, worst->lhs[0], worst->lhs[1],
                    worst->rhs[0], worst->rhs[1]);
    }
    return 0;
}

int tier_exit_code(Tier t) {
    switch (t) {
        case Tier::Local: return 0;
        case Tier::QuantumCompatible: return 10;
        case Tier::NoSignalling: return 20;
        default: return 30;
    }
}

int run_classify(const std::string& path, bool as_json, const Tolerances& tol) {
    const Behavior b = load_behavior(path);
    ClassifyOptions opt;
    opt.tol = tol;
    opt.lp_evidence = true;
    const Verdict v = classify(b, opt);
    if (as_json) {
        std::printf("%s\n", verdict_to_json(v).dump(2).c_str());
    } else {
        std::printf("tier: %s\n", to_string(v.tier));
        std::printf("s_max = %.12g\n", v.s_max);
        std::printf("ns residual = %.12g\n", v.ns_max_residual);
        std::printf("chsh:");
        for (double c : v.chsh) std::printf(" %.12g", c);
        std::printf("\n");
        if (v.lp_weights) {
            std::printf("lp weights:");
            for (double q : *v.lp_weights) std::printf(" %.12g", q);
            std::printf("\n");
        }
        if (v.npa1)
            std::printf("npa1 witness: u = %.12g, v = %.12g, min_eig = %.12g\n", v.npa1->u, v.npa1->v,
                        v.npa1->min_eig);
        if (v.tlm) std::printf("arcsin criterion value = %.12g (bound pi)\n", *v.tlm);
    }
    return tier_exit_code(v.tier);
}

int run_sweep(const std::string& family, double from, double to, int steps, const std::string& out_path,
              const Tolerances& tol) {
    if (!(from >= 0.0 && to <= 1.0 && from < to))
        throw CLI::ValidationError("sweep", "range must satisfy 0 <= from < to <= 1");
    if (steps < 2) throw CLI::ValidationError("sweep", "steps must be >= 2");

    const std::array<double, 4> tsirelson{0.0, 90.0, 45.0, 135.0};
    const Behavior prb = pr_box();
    const Behavior uni = Behavior::uniform();

    std::string csv = "param,s_max,ns_residual,tier\n";
    for (int i = 0; i < steps; ++i) {
        const double param = from + (to - from) * i / (steps - 1);
        const Behavior b = family == "werner" ? planar_behavior(werner_state(param), tsirelson)
                                              : mix(prb, uni, param);
        ClassifyOptions opt;
        opt.tol = tol;
        const Verdict v = classify(b, opt);
        char line[160];
        std::snprintf(line, sizeof line, "%.15g,%.15g,%.15g,%s\n", param, v.s_max, v.ns_max_residual,
                      to_string(v.tier));
        csv += line;
    }
    std::FILE* f = std::fopen(out_path.c_str(), "w");
    if (!f) throw WriteFailure{"cannot open file for writing: " + out_path};
    const bool ok = std::fwrite(csv.data(), 1, csv.size(), f) == csv.size();
    const bool closed = std::fclose(f) == 0;
    if (!ok || !closed) throw WriteFailure{"write failed: " + out_path};
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corrlab: bipartite correlation laboratory for the (2,2,2) scenario"};
    app.require_subcommand(1);

    double tol_scale = 1.0;
    double ns_tol = -1.0, lp_tol = -1.0, psd_tol = -1.0;
    app.add_option("--tol", tol_scale, "scale all classifier tolerances uniformly")->check(CLI::PositiveNumber);
    app.add_option("--ns-tol", ns_tol, "no-signalling tolerance")->check(CLI::PositiveNumber);
    app.add_option("--lp-tol", lp_tol, "vertex-LP slab tolerance")->check(CLI::PositiveNumber);
    app.add_option("--psd-tol", psd_tol, "moment-matrix PSD tolerance")->check(CLI::PositiveNumber);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a behavior file");
    gen->require_subcommand(1);
    std::string angles_csv = "0,90,45,135";
    std::string out_path;
    double visibility = 1.0;
    int vertex_index = 0;
    int lhv_k = 0;
    std::uint64_t lhv_seed = 42;
    std::string model_out;

    auto* g_singlet = gen->add_subcommand("singlet", "singlet state at planar angles (degrees)");
    g_singlet->add_option("--angles", angles_csv, "a0,a1,b0,b1 in degrees, x-z plane");
    g_singlet->add_option("-o,--output", out_path, "output file")->required();

    auto* g_werner = gen->add_subcommand("werner", "Werner state at planar angles");
    g_werner->add_option("--v", visibility, "visibility in [0,1]")->required();
    g_werner->add_option("--angles", angles_csv, "a0,a1,b0,b1 in degrees, x-z plane");
    g_werner->add_option("-o,--output", out_path, "output file")->required();

    auto* g_prbox = gen->add_subcommand("prbox", "the PR box");
    g_prbox->add_option("-o,--output", out_path, "output file")->required();

    auto* g_vertex = gen->add_subcommand("vertex", "deterministic local vertex");
    g_vertex->add_option("--index", vertex_index, "vertex index 0..15")->required();
    g_vertex->add_option("-o,--output", out_path, "output file")->required();

    auto* g_lhv = gen->add_subcommand("random-lhv", "random local hidden-variable model");
    g_lhv->add_option("--k", lhv_k, "number of hidden variables (>= 1)")->required();
    g_lhv->add_option("--seed", lhv_seed, "rng seed (default 42)");
    g_lhv->add_option("--model-out", model_out, "also write the corrlab-hvmodel/1 document");
    g_lhv->add_option("-o,--output", out_path, "output file")->required();

    // analyze / classify
    std::string in_path;
    bool as_json = false;
    auto* analyze = app.add_subcommand("analyze", "report moments, CHSH values and NS residuals");
    analyze->add_option("file", in_path, "corrlab-behavior/1 file")->required();
    analyze->add_flag("--json", as_json, "print a JSON report");

    auto* cls = app.add_subcommand("classify", "place a behavior in the correlation hierarchy");
    cls->add_option("file", in_path, "corrlab-behavior/1 file")->required();
    cls->add_flag("--json", as_json, "print the verdict as JSON");

    // sweep
    std::string family;
    double from = 0.0, to = 1.0;
    int steps = 0;
    std::string csv_path;
    auto* sweep = app.add_subcommand("sweep", "classify a one-parameter family into CSV");
    sweep->add_option("family", family, "werner | prmix")
        ->required()
        ->check(CLI::IsMember({"werner", "prmix"}));
    sweep->add_option("--from", from, "start of the parameter range")->required();
    sweep->add_option("--to", to, "end of the parameter range")->required();
    sweep->add_option("--steps", steps, "number of grid points (>= 2)")->required();
    sweep->add_option("-o,--output", csv_path, "output CSV file")->required();

    try {
        app.parse(argc, argv);

        Tolerances tol = Tolerances{}.scaled(tol_scale);
        if (ns_tol > 0) tol.ns = ns_tol;
        if (lp_tol > 0) tol.lp = lp_tol;
        if (psd_tol > 0) tol.psd = psd_tol;

        if (gen->parsed()) {
            Behavior b;
            if (g_singlet->parsed()) {
                b = planar_behavior(singlet_state(), parse_angles(angles_csv));
            } else if (g_werner->parsed()) {
                if (!(visibility >= 0.0 && visibility <= 1.0))
                    throw CLI::ValidationError("--v", "visibility must lie in [0,1]");
                b = planar_behavior(werner_state(visibility), parse_angles(angles_csv));
            } else if (g_prbox->parsed()) {
                b = pr_box();
            } else if (g_vertex->parsed()) {
                if (vertex_index < 0 || vertex_index > 15)
                    throw CLI::ValidationError("--index", "vertex index must lie in 0..15");
                b = deterministic_vertex(vertex_index);
            } else {
                if (lhv_k < 1) throw CLI::ValidationError("--k", "k must be >= 1");
                const HVModel m = random_local_model(lhv_k, lhv_seed);
                if (!model_out.empty()) save_or_fail(model_to_json(m), model_out);
                b = evaluate(m);
            }
            save_or_fail(behavior_to_json(b), out_path);
            return 0;
        }
        if (analyze->parsed()) return run_analyze(in_path, as_json);
        if (cls->parsed()) return run_classify(in_path, as_json, tol);
        if (sweep->parsed()) return run_sweep(family, from, to, steps, csv_path, tol);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const WriteFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.what.c_str());
        return 3;
    } catch (const ConsistencyError& e) {
        std::fprintf(stderr, "internal consistency failure: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
