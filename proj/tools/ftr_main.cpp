#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>

#include "ftr/actions.hpp"
#include "ftr/graphs.hpp"
#include "ftr/jsonio.hpp"
#include "ftr/tick.hpp"
#include "ftr/verify.hpp"

using namespace ftr;

namespace {

int thread_budget() {
    if (const char* env = std::getenv("FTR_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("cannot parse ") + path + ": " + e.what());
    }
    return j;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
    } else {
        std::ofstream out(out_path);
        out << text;
    }
}

// rows of a tensor as correlator entries
std::map<CorrelatorKey, Rat> tensor_rows(int g, const MultiTensor<Rat>& t) {
    std::map<CorrelatorKey, Rat> rows;
    for (const auto& [k, v] : t.vals) rows[{g, k.out, k.in}] = v;
    return rows;
}

// compute rows for several topologies, fanning out over the pure core
std::map<CorrelatorKey, Rat> fan_out(const std::vector<std::pair<int, int>>& jobs,
                                     const std::function<MultiTensor<Rat>(int, int)>& make) {
    std::map<CorrelatorKey, Rat> rows;
    int budget = thread_budget();
    for (size_t at = 0; at < jobs.size();) {
        std::vector<std::future<std::pair<int, MultiTensor<Rat>>>> batch;
        for (int t = 0; t < budget && at < jobs.size(); ++t, ++at) {
            auto [g, n] = jobs[at];
            batch.push_back(std::async(std::launch::async,
                                       [&, g = g, n = n] { return std::make_pair(g, make(g, n)); }));
        }
        for (auto& f : batch) {
            auto [g, tensor] = f.get();
            for (const auto& [k, v] : tensor_rows(g, tensor)) rows[k] = v;
        }
    }
    return rows;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact F-topological-recursion toolkit"};
    app.require_subcommand(1);

    std::string seed_path, curve_path, out_path, format = "json", data_path;
    std::string beta_path, source_path, target_path, tau_path, side = "tick";
    int g = 0, n = 0, cap = 7, gmax = 1, nmax = 2, order = 0;
    bool count_only = false, dot = false;
    std::string s_str = "1", suite = "core";

    auto* amp = app.add_subcommand("amplitudes", "F-TR amplitudes of a seed");
    amp->add_option("--seed", seed_path)->required();
    amp->add_option("--g", g)->required();
    amp->add_option("--n", n, "number of inputs")->required();
    amp->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    amp->add_option("--out", out_path);

    auto* pot = app.add_subcommand("potential", "vector potential table of a seed");
    pot->add_option("--seed", seed_path)->required();
    pot->add_option("--g", gmax, "genus cap");
    pot->add_option("--n", nmax, "input cap");
    pot->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    pot->add_option("--out", out_path);

    auto* gr = app.add_subcommand("graphs", "the trivalent graph family G_{g,1+n}");
    gr->add_option("--g", g)->required();
    gr->add_option("--n", n, "total number of leaves (1+n)")->required();
    gr->add_flag("--count", count_only, "print |G_{g,1+n}| only");
    gr->add_flag("--dot", dot, "DOT dump of the family");
    gr->add_option("--out", out_path);

    auto* act = app.add_subcommand("act", "apply a symmetry action to a seed");
    act->add_option("--seed", seed_path)->required();
    act->add_option("--beta", beta_path, "Bogoliubov map (JSON linear map)");
    act->add_option("--basis-source", source_path);
    act->add_option("--basis-target", target_path);
    act->add_option("--tau", tau_path, "evaluated translation vector (JSON linear map rows)");
    act->add_option("--cap", cap, "translation degree cap");
    act->add_option("--out", out_path);

    std::string tick_path;
    auto* corr = app.add_subcommand("correlators", "correlators of a (transformed) topological theory");
    corr->add_option("--algebra", seed_path, "algebra JSON: {dim, p[[..]], w[..]}")->required();
    corr->add_option("--data", data_path, "Givental data JSON (L, R, T); omitted = topological");
    corr->add_option("--tick", tick_path, "tick data JSON; acts on the topological theory");
    corr->add_option("--side", side, "psi placement at tick nodes")->check(CLI::IsMember({"tick", "central"}));
    corr->add_option("--g", g)->required();
    corr->add_option("--n", n, "number of inputs")->required();
    corr->add_option("--cap", cap);
    corr->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    corr->add_option("--out", out_path);

    auto* two = app.add_subcommand("twospin", "extended 2-spin correlators");
    two->add_option("--s", s_str)->required();
    two->add_option("--g", g)->required();
    two->add_option("--n", n, "number of inputs")->required();
    two->add_option("--cap", cap);
    two->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    two->add_option("--out", out_path);

    auto* spec = app.add_subcommand("spectral", "residue recursion on a local curve");
    spec->add_option("--curve", curve_path)->required();
    spec->add_option("--g", g)->required();
    spec->add_option("--n", n, "number of inputs")->required();
    spec->add_option("--order", order, "truncation order (default 2(3g-2+n)+4)");
    spec->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    spec->add_option("--out", out_path);

    auto* ver = app.add_subcommand("verify", "run the verification suites");
    ver->add_option("--suite", suite)->check(CLI::IsMember({"core", "full"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (amp->parsed()) {
            Seed s = seed_from_json(read_json(seed_path));
            auto rows = tensor_rows(g, ftr_amplitude(s, g, n));
            emit(out_path, format == "csv" ? correlator_rows_csv(rows, false)
                                           : correlator_rows_json(rows, false).dump(2));
        } else if (pot->parsed()) {
            Seed s = seed_from_json(read_json(seed_path));
            std::vector<std::pair<int, int>> jobs;
            for (int gg = 0; gg <= gmax; ++gg)
                for (int nn = 0; nn <= nmax; ++nn)
                    if (stable(gg, nn)) jobs.push_back({gg, nn});
            auto rows = fan_out(jobs, [&](int gg, int nn) { return ftr_amplitude(s, gg, nn); });
            emit(out_path, format == "csv" ? correlator_rows_csv(rows, false)
                                           : correlator_rows_json(rows, false).dump(2));
        } else if (gr->parsed()) {
            int inputs = n - 1; // --n counts the total leaves of G_{g,1+n}
            if (count_only) {
                Rat c = graph_count(g, inputs, CountMethod::Enumerate);
                if (c != graph_count(g, inputs, CountMethod::Recurse))
                    throw ValidationError("enumeration disagrees with the recursion");
                emit(out_path, c.str());
            } else if (dot) {
                emit(out_path, graphs_dot(g, inputs));
            } else {
                const auto& list = enumerate_graphs(g, inputs);
                Json j = Json::array();
                for (const auto& G : list)
                    j.push_back({{"vertices", G->nv}, {"aut", G->aut}});
                emit(out_path, j.dump(2));
            }
        } else if (act->parsed()) {
            Seed s = seed_from_json(read_json(seed_path));
            Seed outseed;
            if (!beta_path.empty()) {
                outseed = act_bogoliubov(s, linmap_from_json(read_json(beta_path)));
            } else if (!source_path.empty() || !target_path.empty()) {
                if (source_path.empty() || target_path.empty())
                    throw ValidationError("need both --basis-source and --basis-target");
                outseed = act_change_basis(s, {linmap_from_json(read_json(source_path)),
                                               linmap_from_json(read_json(target_path))});
            } else if (!tau_path.empty()) {
                std::map<Loop, Rat> tau;
                for (const auto& [k, v] : linmap_from_json(read_json(tau_path)).vals)
                    tau[k.first] += v;
                outseed = act_translation_eval(s, tau, cap).seed;
            } else {
                throw ValidationError("choose one of --beta, --basis-*, --tau");
            }
            emit(out_path, seed_to_json(outseed).dump(2));
        } else if (corr->parsed()) {
            Json aj = read_json(seed_path);
            int adim = aj.at("dim").get<int>();
            std::vector<std::vector<std::vector<Rat>>> p(
                adim, std::vector<std::vector<Rat>>(adim, std::vector<Rat>(adim, Rat(0))));
            for (int a = 0; a < adim; ++a)
                for (int b = 0; b < adim; ++b)
                    for (int c = 0; c < adim; ++c)
                        p[a][b][c] = Rat::parse(aj.at("p")[a][b][c].get<std::string>());
            std::vector<Rat> w;
            for (const auto& x : aj.at("w")) w.push_back(Rat::parse(x.get<std::string>()));
            Algebra alg = make_algebra(adim, p, w);
            UpDown ud = standard_updown(adim, cap);
            MultiTensor<Rat> t(n);
            if (!tick_path.empty()) {
                if (!data_path.empty())
                    throw ValidationError("--tick and --data cannot be combined");
                TickData tick;
                for (const auto& e : read_json(tick_path)) {
                    Multi slots;
                    for (const auto& sl : e.at("slots"))
                        slots.push_back({sl[0].get<int>(), sl[1].get<int>()});
                    tick.add(e.at("k").get<int>(), slots, Rat::parse(e.at("value").get<std::string>()));
                }
                TickSide ts = (side == "central") ? TickSide::Central : TickSide::TickVertex;
                std::vector<Loop> I;
                for (int a = 0; a < adim; ++a)
                    for (int k = 0; k <= 3 * g - 2 + n; ++k) I.push_back({a, k});
                for_multisets(I, n, 3 * g - 2 + n, [&](const Multi& ms) {
                    for (const auto& i0 : I) {
                        Rat v = tick_correlator(alg, tick, {g, i0, ms}, ts);
                        if (!v.is_zero()) t.add(i0, ms, v);
                    }
                });
            } else if (data_path.empty()) {
                Seed s = loop_seed_topological(alg, ud, cap);
                t = ftr_amplitude(s, g, n);
            } else {
                Json dj = read_json(data_path);
                GiventalData data = GiventalData::identity(adim);
                if (dj.contains("L"))
                    for (int i = 0; i < adim; ++i)
                        for (int j2 = 0; j2 < adim; ++j2)
                            data.L[i][j2] = Rat::parse(dj.at("L")[i][j2].get<std::string>());
                if (dj.contains("R"))
                    for (const auto& rm : dj.at("R")) {
                        std::vector<std::vector<Rat>> m(adim, std::vector<Rat>(adim, Rat(0)));
                        for (int i = 0; i < adim; ++i)
                            for (int j2 = 0; j2 < adim; ++j2)
                                m[i][j2] = Rat::parse(rm[i][j2].get<std::string>());
                        data.Rm.push_back(std::move(m));
                    }
                if (dj.contains("T"))
                    for (const auto& [mstr, vec] : dj.at("T").items()) {
                        std::vector<Rat> v;
                        for (const auto& x : vec) v.push_back(Rat::parse(x.get<std::string>()));
                        data.T[std::stoi(mstr)] = std::move(v);
                    }
                Seed s = loop_seed_lrt(alg, data, ud, cap);
                t = ftr_amplitude(s, g, n);
            }
            auto rows = tensor_rows(g, t);
            emit(out_path, format == "csv" ? correlator_rows_csv(rows, false)
                                           : correlator_rows_json(rows, false).dump(2));
        } else if (two->parsed()) {
            Rat s = Rat::parse(s_str);
            if (s.is_zero()) throw ValidationError("s must be nonzero");
            TwoSpinParams params{s, cap};
            Seed seed = twospin_seed_closed(params);
            auto rows = tensor_rows(g, ftr_amplitude(seed, g, n));
            emit(out_path, format == "csv" ? correlator_rows_csv(rows, true)
                                           : correlator_rows_json(rows, true).dump(2));
        } else if (spec->parsed()) {
            LocalCurve curve = curve_from_json(read_json(curve_path));
            int ord = order > 0 ? order : 2 * (3 * g - 2 + n) + 4;
            auto table = spectral_omega(curve, g, n, ord, true);
            auto rows = tensor_rows(g, table.omega.at({g, n}));
            emit(out_path, format == "csv" ? correlator_rows_csv(rows, false)
                                           : correlator_rows_json(rows, false).dump(2));
        } else if (ver->parsed()) {
            auto results = run_suite(suite == "full");
            bool ok = true;
            for (const auto& r : results) {
                std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << static_cast<long>(r.ms)
                          << " ms)";
                if (!r.detail.empty()) std::cout << " -- " << r.detail;
                std::cout << "\n";
                ok = ok && r.pass;
            }
            return ok ? 0 : 3;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "invalid request: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
