#include "archmap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace archmap {

void HypervolumeSpec::validate() const {
    if (reference_point.values.size() < 2 || reference_point.values.size() > 3)
        throw ValidationError("hypervolume: reference point must have dimension 2 or 3");
    if (normalizer && !(*normalizer > 0)) throw ValidationError("hypervolume: normalizer must be > 0");
}

namespace {

// minimize-space view of a point (maximize positions negated)
std::vector<double> to_min_space(const ObjectiveVector &v) {
    std::vector<double> out = v.values;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (v.senses[i] == Sense::Maximize) out[i] = -out[i];
    return out;
}

// union-of-boxes area for points dominating (rx, ry), staircase sweep
double hv2d(std::vector<std::pair<double, double>> pts, double rx, double ry) {
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double ceiling = ry;
    for (const auto &[x, y] : pts) {
        if (y >= ceiling) continue; // dominated in the (x, y) projection
        area += (rx - x) * (ceiling - y);
        ceiling = y;
    }
    return area;
}

} // namespace

double hypervolume(const std::vector<ObjectiveVector> &front, const HypervolumeSpec &spec) {
    spec.validate();
    if (front.empty()) return 0.0;
    const std::size_t dim = spec.reference_point.values.size();
    std::vector<std::vector<double>> pts;
    pts.reserve(front.size());
    for (std::size_t i = 0; i < front.size(); ++i) {
        if (front[i].senses != spec.reference_point.senses || front[i].values.size() != dim)
            throw ValidationError("hypervolume: front point " + std::to_string(i) +
                                  " does not match the reference point's senses");
        std::vector<double> p = to_min_space(front[i]);
        std::vector<double> r = to_min_space(spec.reference_point);
        for (std::size_t k = 0; k < dim; ++k)
            if (!(p[k] < r[k]))
                throw ValidationError("hypervolume: front point " + std::to_string(i) +
                                      " does not strictly dominate the reference point (position " +
                                      std::to_string(k) + ")");
        pts.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < front.size(); ++i)
        for (std::size_t j = 0; j < front.size(); ++j)
            if (i != j && dominates(front[i], front[j]))
                throw ValidationError("hypervolume: front is not mutually non-dominated (point " +
                                      std::to_string(j) + " is dominated)");

    std::vector<double> ref = to_min_space(spec.reference_point);
    if (dim == 2) {
        std::vector<std::pair<double, double>> p2;
        p2.reserve(pts.size());
        for (const auto &p : pts) p2.emplace_back(p[0], p[1]);
        return hv2d(std::move(p2), ref[0], ref[1]);
    }
    // 3D: slabs along the z axis, each weighted by the 2D staircase of the
    // points already active below it
    std::sort(pts.begin(), pts.end(), [](const auto &a, const auto &b) { return a[2] < b[2]; });
    std::vector<double> zs;
    for (const auto &p : pts) zs.push_back(p[2]);
    zs.push_back(ref[2]);
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
    double volume = 0.0;
    for (std::size_t s = 0; s + 1 < zs.size(); ++s) {
        std::vector<std::pair<double, double>> active;
        for (const auto &p : pts)
            if (p[2] <= zs[s]) active.emplace_back(p[0], p[1]);
        volume += hv2d(std::move(active), ref[0], ref[1]) * (zs[s + 1] - zs[s]);
    }
    return volume;
}

double hypervolume_clipped(const std::vector<ObjectiveVector> &front, const ObjectiveVector &reference) {
    std::vector<ObjectiveVector> kept;
    std::vector<double> ref_min = to_min_space(reference);
    for (const auto &p : front) {
        std::vector<double> pm = to_min_space(p);
        bool dominates_ref = true;
        for (std::size_t k = 0; k < pm.size(); ++k) dominates_ref &= pm[k] < ref_min[k];
        if (dominates_ref) kept.push_back(p);
    }
    // drop dominated stragglers so the exact routine's contract holds
    std::vector<ObjectiveVector> front_only;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < kept.size() && !dominated; ++j)
            dominated = i != j && (dominates(kept[j], kept[i]) || (j < i && kept[j].values == kept[i].values));
        if (!dominated) front_only.push_back(kept[i]);
    }
    if (front_only.empty()) return 0.0;
    HypervolumeSpec spec;
    spec.reference_point = reference;
    return hypervolume(front_only, spec);
}

std::string mapping_class(const std::vector<int> &assignments, const Platform &platform) {
    if (assignments.empty()) throw ValidationError("mapping_class: empty assignment vector");
    for (int c : assignments)
        if (c != assignments[0]) return "distributed";
    return "standalone:" + platform.cus.at(assignments[0]).id;
}

std::vector<CompositionEntry> pareto_composition(const std::vector<std::string> &classes) {
    std::map<std::string, int> counts;
    for (const auto &c : classes) ++counts[c];
    counts["distributed"] += 0; // always reported, even at zero
    std::vector<CompositionEntry> out;
    for (const auto &[label, count] : counts) {
        CompositionEntry e;
        e.label = label;
        e.count = count;
        e.pct = classes.empty() ? 0.0 : 100.0 * count / static_cast<double>(classes.size());
        out.push_back(e);
    }
    // standalone entries first (platform order not known here), distributed last
    std::stable_sort(out.begin(), out.end(), [](const CompositionEntry &a, const CompositionEntry &b) {
        bool da = a.label == "distributed", db = b.label == "distributed";
        if (da != db) return !da;
        return a.label < b.label;
    });
    return out;
}

std::vector<CompositionEntry> pareto_composition(const std::vector<IoeCandidate> &archive,
                                                 const Platform &platform) {
    std::vector<std::string> classes;
    classes.reserve(archive.size());
    for (const auto &c : archive) classes.push_back(mapping_class(c.assignments, platform));
    std::vector<CompositionEntry> out = pareto_composition(classes);
    // make every platform CU visible in the breakdown
    std::set<std::string> present;
    for (const auto &e : out) present.insert(e.label);
    for (const auto &cu : platform.cus) {
        std::string label = "standalone:" + cu.id;
        if (!present.count(label)) {
            CompositionEntry e;
            e.label = label;
            out.push_back(e);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const CompositionEntry &a, const CompositionEntry &b) {
        bool da = a.label == "distributed", db = b.label == "distributed";
        if (da != db) return !da;
        return a.label < b.label;
    });
    return out;
}

EaVsRandomResult ea_vs_random(const WorkloadPlan &plan, const CostTable &table, const Platform &platform,
                              std::uint64_t budget, const std::vector<std::uint64_t> &seeds,
                              const IoeConfig &base_cfg, BigCount oracle_budget) {
    EaVsRandomResult result;
    const int dvfs = platform.default_setting;
    PlanCostView view(plan, table, platform, dvfs);
    StandaloneRefs refs = standalone_refs(plan, table, platform, dvfs);
    result.reference =
        ObjectiveVector::minimize({1.1 * refs.worst_latency, 1.1 * refs.worst_energy});

    BigCount count = feasible_mapping_count(view);
    double shared_normalizer = 0.0;
    if (count <= oracle_budget) {
        IoeConfig cfg0 = base_cfg;
        cfg0.constraints = IoeConstraints{};
        OracleResult oracle = brute_force_oracle(plan, table, platform, cfg0, oracle_budget);
        std::vector<ObjectiveVector> front;
        for (const auto &c : oracle.pareto) front.push_back(ObjectiveVector::minimize({c.latency, c.energy}));
        shared_normalizer = hypervolume_clipped(front, result.reference);
        result.oracle_normalized = shared_normalizer > 0.0;
    }

    for (std::uint64_t seed : seeds) {
        EaVsRandomSeedResult sr;
        sr.seed = seed;
        if (budget == 0) {
            result.per_seed.push_back(sr);
            continue;
        }
        IoeConfig cfg = base_cfg;
        cfg.exhaustive_init = ExhaustiveInit::Off;
        cfg.population = static_cast<int>(std::max<std::uint64_t>(2, std::min<std::uint64_t>(cfg.population, budget)));
        cfg.generations = static_cast<int>(budget / cfg.population) - 1;
        if (cfg.generations < 0) cfg.generations = 0;

        IoeResult ea = search_mappings(plan, table, platform, cfg, seed);
        std::vector<double> raw_ea;
        for (const auto &snap : ea.generation_fronts) {
            std::vector<ObjectiveVector> pts;
            for (const auto &[lat, en] : snap) pts.push_back(ObjectiveVector::minimize({lat, en}));
            raw_ea.push_back(hypervolume_clipped(pts, result.reference));
        }

        // uniform random sampling, same chunk structure
        Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
        std::vector<std::pair<double, double>> best_points; // running non-dominated set
        auto offer = [&](double lat, double en) {
            for (const auto &[l, e] : best_points)
                if ((l <= lat && e <= en && (l < lat || e < en)) || (l == lat && e == en)) return;
            std::erase_if(best_points, [&](const std::pair<double, double> &p) {
                return lat <= p.first && en <= p.second && (lat < p.first || en < p.second);
            });
            best_points.emplace_back(lat, en);
        };
        std::vector<double> raw_rand;
        std::vector<int> assign(plan.units.size());
        for (int chunk = 0; chunk <= cfg.generations; ++chunk) {
            for (int i = 0; i < cfg.population; ++i) {
                for (std::size_t u = 0; u < plan.units.size(); ++u) {
                    const auto &feas = view.feasible_cus(u);
                    std::uniform_int_distribution<std::size_t> d(0, feas.size() - 1);
                    assign[u] = feas[d(rng)];
                }
                double lat, en;
                int tr;
                view.eval_totals(assign, lat, en, tr);
                offer(lat, en);
            }
            std::vector<ObjectiveVector> pts;
            for (const auto &[lat, en] : best_points) pts.push_back(ObjectiveVector::minimize({lat, en}));
            raw_rand.push_back(hypervolume_clipped(pts, result.reference));
        }

        double normalizer = shared_normalizer;
        if (!(normalizer > 0.0)) {
            // fall back to the best front observed by either method this seed
            std::vector<ObjectiveVector> pool;
            for (const auto &[lat, en] : ea.generation_fronts.back())
                pool.push_back(ObjectiveVector::minimize({lat, en}));
            for (const auto &[lat, en] : best_points) pool.push_back(ObjectiveVector::minimize({lat, en}));
            normalizer = hypervolume_clipped(pool, result.reference);
        }
        auto normalize = [&](const std::vector<double> &raw) {
            std::vector<double> out;
            for (double v : raw) out.push_back(normalizer > 0 ? v / normalizer : 0.0);
            return out;
        };
        sr.ea_trace = normalize(raw_ea);
        sr.random_trace = normalize(raw_rand);
        sr.ea_final = sr.ea_trace.empty() ? 0.0 : sr.ea_trace.back();
        sr.random_final = sr.random_trace.empty() ? 0.0 : sr.random_trace.back();
        result.per_seed.push_back(std::move(sr));
    }

    double ea_sum = 0.0, rand_sum = 0.0;
    for (const auto &sr : result.per_seed) {
        ea_sum += sr.ea_final;
        rand_sum += sr.random_final;
    }
    if (!result.per_seed.empty()) {
        result.ea_aggregate = ea_sum / static_cast<double>(result.per_seed.size());
        result.random_aggregate = rand_sum / static_cast<double>(result.per_seed.size());
    }
    return result;
}

} // namespace archmap
