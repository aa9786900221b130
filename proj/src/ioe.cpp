#include "archmap/ioe.hpp"

#include <algorithm>
#include <cmath>

namespace archmap {

void IoeConfig::validate() const {
    if (population < 2) throw ValidationError("[ioe] population must be >= 2");
    if (generations < 0) throw ValidationError("[ioe] generations must be >= 0");
    auto prob = [](double p, const char *what) {
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(std::string("[ioe] ") + what + " must be in [0,1]");
    };
    prob(mutation_prob, "mutation_prob");
    prob(crossover_prob, "crossover_prob");
    if (!(elite_fraction > 0.0 && elite_fraction <= 1.0))
        throw ValidationError("[ioe] elite_fraction must be in (0,1]");
    if (!std::isfinite(gamma1) || !std::isfinite(gamma2))
        throw ValidationError("[ioe] gamma exponents must be finite");
    for (auto v : {constraints.latency_ms, constraints.energy_mj, constraints.power_mw, constraints.latency_increase})
        if (v && !(*v > 0)) throw ValidationError("[ioe] constraint targets must be > 0");
}

IoeConfig IoeConfig::from_ini(const Ini &ini) {
    IoeConfig cfg;
    const std::string sec = "ioe";
    cfg.population = static_cast<int>(ini.get_int(sec, "population", cfg.population));
    cfg.generations = static_cast<int>(ini.get_int(sec, "generations", cfg.generations));
    cfg.mutation_prob = ini.get_double(sec, "mutation_prob", cfg.mutation_prob);
    cfg.crossover_prob = ini.get_double(sec, "crossover_prob", cfg.crossover_prob);
    cfg.gamma1 = ini.get_double(sec, "gamma1", cfg.gamma1);
    cfg.gamma2 = ini.get_double(sec, "gamma2", cfg.gamma2);
    cfg.elite_fraction = ini.get_double(sec, "elite_fraction", cfg.elite_fraction);
    if (ini.has(sec, "latency_target")) cfg.constraints.latency_ms = ini.get_double(sec, "latency_target", 0);
    if (ini.has(sec, "energy_target")) cfg.constraints.energy_mj = ini.get_double(sec, "energy_target", 0);
    if (ini.has(sec, "power_target")) cfg.constraints.power_mw = ini.get_double(sec, "power_target", 0);
    if (ini.has(sec, "latency_increase")) cfg.constraints.latency_increase = ini.get_double(sec, "latency_increase", 0);
    std::string dvfs = to_lower(ini.get_string(sec, "dvfs", "fixed"));
    if (dvfs == "searched") {
        cfg.dvfs_mode = DvfsMode::Searched;
    } else if (dvfs == "fixed" || dvfs.rfind("fixed:", 0) == 0) {
        cfg.dvfs_mode = DvfsMode::Fixed;
        if (dvfs.size() > 6) cfg.dvfs_setting = ini.require_string(sec, "dvfs").substr(6);
    } else {
        throw ValidationError("[ioe] dvfs must be 'fixed', 'fixed:<label>' or 'searched'");
    }
    std::string ex = to_lower(ini.get_string(sec, "exhaustive_init", "auto"));
    if (ex == "auto") cfg.exhaustive_init = ExhaustiveInit::Auto;
    else if (ex == "on") cfg.exhaustive_init = ExhaustiveInit::On;
    else if (ex == "off") cfg.exhaustive_init = ExhaustiveInit::Off;
    else throw ValidationError("[ioe] exhaustive_init must be auto|on|off");
    cfg.validate();
    return cfg;
}

StandaloneRefs standalone_refs(const WorkloadPlan &plan, const CostTable &table, const Platform &platform,
                               int dvfs_setting) {
    StandaloneRefs refs;
    for (std::size_t c = 0; c < platform.cus.size(); ++c) {
        bool supports_all = true;
        for (const auto &unit : plan.units)
            supports_all &= platform.cus[c].capability.supports(unit);
        if (!supports_all) continue;
        StandaloneRef ref;
        ref.cu = static_cast<int>(c);
        ref.eval = standalone_eval(plan, static_cast<int>(c), table, platform, dvfs_setting);
        refs.per_cu.push_back(ref);
    }
    if (refs.per_cu.empty())
        throw InfeasibleError("plan is not mappable end-to-end on any single CU of platform '" + platform.name + "'");
    refs.best_latency_cu = refs.per_cu[0].cu;
    refs.best_energy_cu = refs.per_cu[0].cu;
    refs.best_latency = refs.worst_latency = refs.per_cu[0].eval.total_latency;
    refs.best_energy = refs.worst_energy = refs.per_cu[0].eval.total_energy;
    for (const auto &ref : refs.per_cu) {
        if (ref.eval.total_latency < refs.best_latency) {
            refs.best_latency = ref.eval.total_latency;
            refs.best_latency_cu = ref.cu;
        }
        if (ref.eval.total_energy < refs.best_energy) {
            refs.best_energy = ref.eval.total_energy;
            refs.best_energy_cu = ref.cu;
        }
        refs.worst_latency = std::max(refs.worst_latency, ref.eval.total_latency);
        refs.worst_energy = std::max(refs.worst_energy, ref.eval.total_energy);
    }
    return refs;
}

double ioe_fitness(const PerfEval &eval, const StandaloneRefs &refs, double gamma1, double gamma2) {
    if (!(refs.best_energy > 0) || !(refs.best_latency > 0))
        throw ValidationError("ioe_fitness: standalone reference values must be > 0");
    return std::pow(eval.total_energy / refs.best_energy, gamma1) *
           std::pow(eval.total_latency / refs.best_latency, gamma2);
}

BigCount feasible_mapping_count(const PlanCostView &view) {
    BigCount count = 1;
    for (int i = 0; i < view.unit_count(); ++i)
        count = big_mul_checked(count, view.feasible_cus(static_cast<std::size_t>(i)).size(), "feasible mappings");
    return count;
}

namespace {

struct EffectiveConstraints {
    std::optional<double> latency, energy, power_mw;

    bool satisfied(double lat, double en) const {
        if (latency && !(lat < *latency)) return false;
        if (energy && !(en < *energy)) return false;
        if (power_mw && !(1000.0 * en / lat < *power_mw)) return false;
        return true;
    }
    bool any() const { return latency || energy || power_mw; }
};

EffectiveConstraints resolve_constraints(const IoeConstraints &c, const StandaloneRefs &refs) {
    EffectiveConstraints out;
    out.latency = c.latency_ms;
    out.energy = c.energy_mj;
    out.power_mw = c.power_mw;
    if (c.latency_increase) {
        double bound = (1.0 + *c.latency_increase) * refs.best_latency;
        if (!out.latency || bound < *out.latency) out.latency = bound;
    }
    return out;
}

// Incremental (latency, energy) front with deterministic tie handling:
// equal objective pairs keep the first-seen mapping.
class MappingFront {
public:
    bool offer(const std::vector<int> &assignments, double lat, double en, int transitions) {
        for (const auto &m : members_) {
            bool no_worse = m.latency <= lat && m.energy <= en;
            bool strictly = m.latency < lat || m.energy < en;
            if ((no_worse && strictly) || (m.latency == lat && m.energy == en)) return false;
        }
        members_.erase(std::remove_if(members_.begin(), members_.end(),
                                      [&](const IoeCandidate &m) {
                                          return lat <= m.latency && en <= m.energy &&
                                                 (lat < m.latency || en < m.energy);
                                      }),
                       members_.end());
        members_.push_back(IoeCandidate{assignments, lat, en, transitions});
        return true;
    }

    std::vector<IoeCandidate> sorted() const {
        std::vector<IoeCandidate> out = members_;
        std::sort(out.begin(), out.end(), [](const IoeCandidate &a, const IoeCandidate &b) {
            if (a.latency != b.latency) return a.latency < b.latency;
            if (a.energy != b.energy) return a.energy < b.energy;
            return a.assignments < b.assignments;
        });
        return out;
    }

    const std::vector<IoeCandidate> &members() const { return members_; }
    bool empty() const { return members_.empty(); }

private:
    std::vector<IoeCandidate> members_;
};

// m*: minimal fitness, ties by lower latency, then lexicographic genome order.
struct BestTracker {
    bool has = false;
    IoeCandidate cand;
    double fitness = 0.0;

    void offer(const IoeCandidate &c, double f) {
        if (!has || f < fitness || (f == fitness && c.latency < cand.latency) ||
            (f == fitness && c.latency == cand.latency && c.assignments < cand.assignments)) {
            has = true;
            cand = c;
            fitness = f;
        }
    }
};

int resolve_dvfs_setting(const IoeConfig &cfg, const Platform &platform) {
    if (cfg.dvfs_mode == DvfsMode::Fixed && !cfg.dvfs_setting.empty()) {
        int idx = platform.setting_index(cfg.dvfs_setting);
        if (idx < 0)
            throw ValidationError("[ioe] dvfs setting '" + cfg.dvfs_setting + "' not defined by platform '" +
                                  platform.name + "'");
        return idx;
    }
    return platform.default_setting;
}

std::vector<std::pair<double, double>> front_snapshot(const MappingFront &front) {
    std::vector<std::pair<double, double>> snap;
    snap.reserve(front.members().size());
    for (const auto &m : front.members()) snap.emplace_back(m.latency, m.energy);
    std::sort(snap.begin(), snap.end());
    return snap;
}

void enumerate_feasible(const PlanCostView &view,
                        const std::function<void(const std::vector<int> &)> &visit) {
    const int n = view.unit_count();
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<int> assign(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) assign[i] = view.feasible_cus(i)[0];
    for (;;) {
        visit(assign);
        int pos = n - 1;
        while (pos >= 0) {
            const auto &feas = view.feasible_cus(static_cast<std::size_t>(pos));
            if (++idx[pos] < feas.size()) {
                assign[pos] = feas[idx[pos]];
                break;
            }
            idx[pos] = 0;
            assign[pos] = feas[0];
            --pos;
        }
        if (pos < 0) break;
    }
}

} // namespace

IoeResult search_mappings(const WorkloadPlan &plan, const CostTable &table, const Platform &platform,
                          const IoeConfig &cfg, std::uint64_t seed) {
    cfg.validate();
    const int dvfs = resolve_dvfs_setting(cfg, platform);
    PlanCostView view(plan, table, platform, dvfs);
    StandaloneRefs refs = standalone_refs(plan, table, platform, dvfs);
    EffectiveConstraints constraints = resolve_constraints(cfg.constraints, refs);

    IoeResult result;
    result.normalization = refs;
    result.dvfs_setting = dvfs;
    result.ea_dvfs_setting = dvfs;
    result.dvfs_label = platform.settings[dvfs].label;

    const std::size_t n = plan.units.size();
    BigCount count = feasible_mapping_count(view);
    bool exhaustive = cfg.exhaustive_init == ExhaustiveInit::On ||
                      (cfg.exhaustive_init == ExhaustiveInit::Auto &&
                       count <= static_cast<BigCount>(std::min<std::uint64_t>(cfg.budget(), cfg.exhaustive_cap)));
    if (exhaustive && count > static_cast<BigCount>(cfg.exhaustive_cap))
        throw BudgetError("exhaustive initialization requested but feasible mapping count " + big_to_string(count) +
                          " exceeds cap " + std::to_string(cfg.exhaustive_cap));

    MappingFront front;
    BestTracker best;

    auto consider = [&](const std::vector<int> &assign, double lat, double en, int transitions) {
        if (constraints.any() && !constraints.satisfied(lat, en)) return;
        IoeCandidate cand{assign, lat, en, transitions};
        front.offer(assign, lat, en, transitions);
        best.offer(cand, ioe_fitness(PerfEval{lat, en, transitions, {}}, refs, cfg.gamma1, cfg.gamma2));
    };

    if (exhaustive) {
        result.exhaustive = true;
        enumerate_feasible(view, [&](const std::vector<int> &assign) {
            double lat, en;
            int tr;
            view.eval_totals(assign, lat, en, tr);
            ++result.evaluations;
            consider(assign, lat, en, tr);
        });
        result.generation_fronts.push_back(front_snapshot(front));
    } else {
        Rng rng(seed);
        std::uniform_real_distribution<double> coin(0.0, 1.0);

        std::vector<std::vector<int>> pop;
        pop.reserve(static_cast<std::size_t>(cfg.population));
        for (const auto &ref : refs.per_cu) {
            if (static_cast<int>(pop.size()) >= cfg.population) break;
            pop.emplace_back(n, ref.cu);
        }
        auto random_mapping = [&]() {
            std::vector<int> m(n);
            for (std::size_t i = 0; i < n; ++i) {
                const auto &feas = view.feasible_cus(i);
                std::uniform_int_distribution<std::size_t> d(0, feas.size() - 1);
                m[i] = feas[d(rng)];
            }
            return m;
        };
        while (static_cast<int>(pop.size()) < cfg.population) pop.push_back(random_mapping());

        std::vector<double> lats(pop.size()), ens(pop.size());
        std::vector<int> trs(pop.size());
        for (int g = 0; g <= cfg.generations; ++g) {
            lats.resize(pop.size());
            ens.resize(pop.size());
            trs.resize(pop.size());
            parallel_for(pop.size(), cfg.threads, [&](std::size_t i) {
                view.eval_totals(pop[i], lats[i], ens[i], trs[i]);
            });
            result.evaluations += pop.size();
            for (std::size_t i = 0; i < pop.size(); ++i) consider(pop[i], lats[i], ens[i], trs[i]);
            result.generation_fronts.push_back(front_snapshot(front));
            if (g == cfg.generations) break;

            // constraint filter ahead of selection; an all-infeasible population
            // falls back to fresh random sampling
            std::vector<std::size_t> selectable;
            for (std::size_t i = 0; i < pop.size(); ++i)
                if (!constraints.any() || constraints.satisfied(lats[i], ens[i])) selectable.push_back(i);

            std::vector<std::vector<int>> next;
            next.reserve(static_cast<std::size_t>(cfg.population));
            if (selectable.empty()) {
                while (static_cast<int>(next.size()) < cfg.population) next.push_back(random_mapping());
                pop = std::move(next);
                continue;
            }

            std::vector<ObjectiveVector> objs;
            objs.reserve(selectable.size());
            for (std::size_t i : selectable) objs.push_back(ObjectiveVector::minimize({lats[i], ens[i]}));
            RankInfo info = rank_population(objs);
            std::vector<std::size_t> order(selectable.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nsga_less(info, a, b); });
            std::size_t elite_count = static_cast<std::size_t>(
                std::ceil(cfg.elite_fraction * static_cast<double>(selectable.size())));
            elite_count = std::max<std::size_t>(1, std::min(elite_count, order.size()));
            std::vector<std::size_t> elites(order.begin(), order.begin() + static_cast<long>(elite_count));

            for (std::size_t e : elites) {
                if (static_cast<int>(next.size()) >= cfg.population) break;
                next.push_back(pop[selectable[e]]);
            }
            while (static_cast<int>(next.size()) < cfg.population) {
                std::size_t pa = tournament_pick(rng, info, elites);
                std::size_t pb = tournament_pick(rng, info, elites);
                std::vector<int> c1 = pop[selectable[pa]];
                std::vector<int> c2 = pop[selectable[pb]];
                if (n >= 2 && coin(rng) < cfg.crossover_prob) {
                    std::uniform_int_distribution<std::size_t> cut_dist(1, n - 1);
                    std::size_t cut = cut_dist(rng);
                    for (std::size_t i = cut; i < n; ++i) std::swap(c1[i], c2[i]);
                }
                auto mutate = [&](std::vector<int> &m) {
                    for (std::size_t i = 0; i < n; ++i) {
                        if (coin(rng) >= cfg.mutation_prob) continue;
                        const auto &feas = view.feasible_cus(i);
                        std::uniform_int_distribution<std::size_t> d(0, feas.size() - 1);
                        m[i] = feas[d(rng)];
                    }
                };
                mutate(c1);
                mutate(c2);
                next.push_back(std::move(c1));
                if (static_cast<int>(next.size()) < cfg.population) next.push_back(std::move(c2));
            }
            pop = std::move(next);
        }
    }

    if (front.empty()) {
        // §4.3.3 fallback: nothing satisfied the constraints, report the
        // standalone evaluations instead
        result.feasible = false;
        MappingFront fallback;
        BestTracker fb_best;
        for (const auto &ref : refs.per_cu) {
            std::vector<int> assign(n, ref.cu);
            IoeCandidate cand{assign, ref.eval.total_latency, ref.eval.total_energy, 0};
            fallback.offer(assign, cand.latency, cand.energy, 0);
            fb_best.offer(cand, ioe_fitness(ref.eval, refs, cfg.gamma1, cfg.gamma2));
        }
        result.pareto = fallback.sorted();
        best = fb_best;
    } else {
        result.pareto = front.sorted();
    }

    result.best_mapping.assignments = best.cand.assignments;
    result.best_mapping.dvfs = dvfs;
    result.best_fitness = best.fitness;
    result.best_eval = view.eval(best.cand.assignments);

    if (cfg.dvfs_mode == DvfsMode::Searched) {
        DvfsSearchResult ds = search_dvfs(plan, best.cand.assignments, table, platform, cfg.gamma1, cfg.gamma2);
        result.best_mapping.dvfs = ds.setting;
        result.best_eval = ds.eval;
        result.best_fitness = ds.fitness;
        result.dvfs_setting = ds.setting;
        result.dvfs_label = ds.label;
        result.evaluations += static_cast<std::uint64_t>(ds.candidates_evaluated);
    }
    return result;
}

OracleResult brute_force_oracle(const WorkloadPlan &plan, const CostTable &table, const Platform &platform,
                                const IoeConfig &cfg, BigCount budget) {
    cfg.validate();
    const int dvfs = resolve_dvfs_setting(cfg, platform);
    PlanCostView view(plan, table, platform, dvfs);
    StandaloneRefs refs = standalone_refs(plan, table, platform, dvfs);
    EffectiveConstraints constraints = resolve_constraints(cfg.constraints, refs);

    BigCount count = feasible_mapping_count(view);
    if (count > budget)
        throw BudgetError("brute-force refusal: " + big_to_string(count) + " feasible mappings exceed the budget of " +
                          big_to_string(budget));

    OracleResult result;
    result.enumerated = count;
    MappingFront front;
    BestTracker best;
    enumerate_feasible(view, [&](const std::vector<int> &assign) {
        double lat, en;
        int tr;
        view.eval_totals(assign, lat, en, tr);
        if (constraints.any() && !constraints.satisfied(lat, en)) return;
        front.offer(assign, lat, en, tr);
        best.offer(IoeCandidate{assign, lat, en, tr},
                   ioe_fitness(PerfEval{lat, en, tr, {}}, refs, cfg.gamma1, cfg.gamma2));
    });
    result.pareto = front.sorted();
    result.feasible = !front.empty();
    if (best.has) {
        result.best_mapping.assignments = best.cand.assignments;
        result.best_mapping.dvfs = dvfs;
        result.best_eval = view.eval(best.cand.assignments);
        result.best_fitness = best.fitness;
    }
    return result;
}

DvfsSearchResult search_dvfs(const WorkloadPlan &plan, const std::vector<int> &assignments,
                             const CostTable &table, const Platform &platform, double gamma1, double gamma2) {
    if (assignments.size() != plan.units.size())
        throw ValidationError("search_dvfs: assignment count != plan unit count");
    StandaloneRefs refs = standalone_refs(plan, table, platform, platform.default_setting);
    DvfsSearchResult best;
    bool has = false;
    for (std::size_t s = 0; s < platform.settings.size(); ++s) {
        PlanCostView view(plan, table, platform, static_cast<int>(s));
        for (std::size_t i = 0; i < assignments.size(); ++i)
            if (!view.cu_feasible(i, assignments[i]))
                throw ValidationError("search_dvfs: mapping assigns unsupported CU at unit " + std::to_string(i));
        PerfEval eval = view.eval(assignments);
        double fit = ioe_fitness(eval, refs, gamma1, gamma2);
        if (!has || fit < best.fitness) {
            has = true;
            best.setting = static_cast<int>(s);
            best.label = platform.settings[s].label;
            best.eval = eval;
            best.fitness = fit;
        }
    }
    best.candidates_evaluated = static_cast<int>(platform.settings.size());
    return best;
}

} // namespace archmap
