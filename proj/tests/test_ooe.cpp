#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "archmap/ooe.hpp"
#include "helpers.hpp"

using namespace archmap;

namespace {

const std::string kFixtures = std::string(ARCHMAP_SOURCE_DIR) + "/fixtures";

// toy space used by the exhaustive-equivalence checks: 16 genomes, <= 14 units
SpaceConfig toy_space() {
    SpaceConfig cfg;
    cfg.superblock_count = 2;
    cfg.depth_values = {2, 3};
    cfg.op_values = {GraphOp::Gin, GraphOp::EdgeConv};
    cfg.fc_pre_values = {0};
    cfg.ffn_use_values = {1};
    cfg.width_values = {192};
    cfg.stage_dims = {{196, 320, 12}, {196, 320, 16}};
    return cfg;
}

OoeConfig toy_ooe(int population, int generations) {
    OoeConfig cfg;
    cfg.population = population;
    cfg.generations = generations;
    cfg.ioe.population = 32;
    cfg.ioe.generations = 4;
    return cfg;
}

struct Point3 {
    double acc, lat, energy;
    bool operator<(const Point3 &o) const {
        if (acc != o.acc) return acc > o.acc;
        if (lat != o.lat) return lat < o.lat;
        return energy < o.energy;
    }
    bool operator==(const Point3 &o) const { return acc == o.acc && lat == o.lat && energy == o.energy; }
};

bool dominates3(const Point3 &a, const Point3 &b) {
    bool no_worse = a.acc >= b.acc && a.lat <= b.lat && a.energy <= b.energy;
    bool better = a.acc > b.acc || a.lat < b.lat || a.energy < b.energy;
    return no_worse && better;
}

} // namespace

TEST_CASE("surrogate accuracy is deterministic, bounded, and op-sensitive") {
    AccuracyModel model = AccuracyModel::surrogate();
    SpaceConfig cfg = SpaceConfig::defaults();
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        ArchitectureGenome g = random_genome(cfg, rng);
        double acc = model.accuracy(g);
        CHECK(acc == model.accuracy(g));
        CHECK(acc >= 0.0);
        CHECK(acc <= 100.0);
    }
    ArchitectureGenome gin = parse_genome_string("ops=G-G-G-G", cfg.backbone);
    ArchitectureGenome edge = parse_genome_string("ops=E-E-E-E", cfg.backbone);
    ArchitectureGenome mrc = parse_genome_string("ops=M-M-M-M", cfg.backbone);
    CHECK(model.accuracy(gin) < model.accuracy(mrc));
    CHECK(model.accuracy(edge) > model.accuracy(mrc));
    // mirrors the measured spread: a GIN-only backbone gives up a few points
    CHECK(model.accuracy(mrc) - model.accuracy(gin) == doctest::Approx(4 * (1.00 - 0.08)));
}

TEST_CASE("accuracy tables resolve by canonical genome string") {
    AccuracyModel table = AccuracyModel::load_table(kFixtures + "/acc_demo.acc");
    SpaceConfig cfg = SpaceConfig::defaults();
    ArchitectureGenome b0 =
        parse_genome_string("ops=M-M-M-M;d=4,4,4,4;ffn=1,1,1,1;pre=1,1,1,1;w=192,192,192,192", cfg.backbone);
    CHECK(table.accuracy(b0) == doctest::Approx(94.15));
    ArchitectureGenome a1 =
        parse_genome_string("ops=G-G-G-G;d=4,4,4,4;ffn=1,1,1,1;pre=0,0,0,0;w=192,192,192,192", cfg.backbone);
    CHECK(table.accuracy(a1) == doctest::Approx(94.46));
    ArchitectureGenome unknown = parse_genome_string("ops=M-M-M-E", cfg.backbone);
    CHECK_THROWS_AS((void)table.accuracy(unknown), LookupError);
    CHECK_THROWS_AS((void)AccuracyModel::table({{"ops=G", 150.0}}), ValidationError);
}

TEST_CASE("ooe objectives and the weighted-product scalar") {
    PerfEval eval{16.02, 97.0, 4, {}};
    ObjectiveVector v = ooe_objectives(94.25, eval);
    REQUIRE(v.values.size() == 3);
    CHECK(v.values[0] == doctest::Approx(94.25));
    CHECK(v.senses[0] == Sense::Maximize);
    CHECK(v.values[1] == doctest::Approx(16.02));
    CHECK(v.values[2] == doctest::Approx(97.0));

    double scalar = ooe_scalar(94.25, eval, 1, 1, 1);
    CHECK(scalar == doctest::Approx(94.25 / (16.02 * 97.0)).epsilon(1e-12));
    CHECK(scalar == doctest::Approx(0.06065).epsilon(1e-3));

    // zero latency/energy weights reduce the scalar to accuracy
    CHECK(ooe_scalar(94.25, eval, 1, 0, 0) == doctest::Approx(94.25));
    CHECK(ooe_scalar(94.25, eval, 1, 1, 1) == ooe_scalar(94.25, PerfEval{16.02, 97.0, 0, {}}, 1, 1, 1));

    PerfEval degenerate{0.0, 97.0, 0, {}};
    CHECK_THROWS_AS((void)ooe_scalar(94.25, degenerate, 1, 1, 1), ValidationError);
    CHECK_NOTHROW((void)ooe_scalar(94.25, degenerate, 1, 0, 1)); // zero weight tolerates it
    CHECK_THROWS_AS((void)ooe_objectives(101.0, eval), ValidationError);
}

TEST_CASE("single-genome space collapses to one archive member with its IOE result") {
    SpaceConfig cfg = toy_space();
    cfg.depth_values = {2};
    cfg.op_values = {GraphOp::Gin};
    SynthSpec spec = SynthSpec::xavier_like();
    Platform platform = platform_from_synth(spec);
    CostTable table = synth_profile(1, spec, cfg);
    AccuracyModel acc = AccuracyModel::surrogate();

    OoeConfig ooe = toy_ooe(4, 2);
    CoSearchResult r = co_search(cfg, platform, table, acc, ooe, 11);
    REQUIRE(!r.pareto.empty());
    CHECK(r.genomes_evaluated == 1);

    // the archive is exactly that genome paired with its IOE mapping front
    const CoSearchMember *best = nullptr;
    for (const auto &m : r.pareto) {
        CHECK(m.genome == r.pareto[0].genome);
        CHECK(m.accuracy == doctest::Approx(acc.accuracy(m.genome)));
        if (m.best_mapping) best = &m;
    }
    REQUIRE(best != nullptr);
    WorkloadPlan plan = expand_architecture(best->genome, cfg.granularity, cfg);
    IoeConfig ic = ooe.ioe;
    IoeResult ir = search_mappings(plan, table, platform, ic, best->ioe_seed);
    CHECK(best->eval.total_latency == doctest::Approx(ir.best_eval.total_latency));
    CHECK(best->eval.total_energy == doctest::Approx(ir.best_eval.total_energy));
    CHECK(best->mapping.assignments == ir.best_mapping.assignments);
    // every archived pairing appears on the replayed mapping front
    std::set<std::pair<double, double>> front_points;
    for (const auto &c : ir.pareto) front_points.insert({c.latency, c.energy});
    for (const auto &m : r.pareto)
        CHECK(front_points.count({m.eval.total_latency, m.eval.total_energy}) == 1);
}

TEST_CASE("toy space: co-search equals the full cross-product brute force") {
    SpaceConfig cfg = toy_space();
    SynthSpec spec = SynthSpec::xavier_like();
    Platform platform = platform_from_synth(spec);
    CostTable table = synth_profile(2, spec, cfg);
    AccuracyModel acc = AccuracyModel::surrogate();

    // exhaustive reference: every genome x its exact mapping front
    std::vector<ArchitectureGenome> all = enumerate_space(cfg);
    REQUIRE(all.size() == 16);
    std::vector<Point3> pool;
    IoeConfig oracle_cfg;
    for (const auto &g : all) {
        WorkloadPlan plan = expand_architecture(g, cfg.granularity, cfg);
        OracleResult o = brute_force_oracle(plan, table, platform, oracle_cfg, BigCount(1) << 20);
        double a = acc.accuracy(g);
        for (const auto &c : o.pareto) pool.push_back({a, c.latency, c.energy});
    }
    std::vector<Point3> want;
    for (const auto &p : pool) {
        bool dominated = false, duplicate = false;
        for (const auto &q : pool) {
            dominated |= dominates3(q, p);
            }
        for (const auto &q : want) duplicate |= q == p;
        if (!dominated && !duplicate) want.push_back(p);
    }
    std::sort(want.begin(), want.end());

    // co-search with enumerated init (pop >= 16) and exhaustive inner budgets
    OoeConfig ooe = toy_ooe(16, 3);
    ooe.ioe.population = 64;
    ooe.ioe.generations = 300; // budget >= 2^14 so the inner engine enumerates
    CoSearchResult r = co_search(cfg, platform, table, acc, ooe, 5);
    REQUIRE(!r.pareto.empty());

    // the archive must equal the exhaustive 3-objective front...
    std::vector<Point3> got;
    for (const auto &m : r.pareto) got.push_back({m.accuracy, m.eval.total_latency, m.eval.total_energy});
    std::sort(got.begin(), got.end());
    CHECK(got.size() == want.size());
    CHECK(got == want);
    // ...with accuracies passed through undistorted
    for (const auto &m : r.pareto) CHECK(m.accuracy == acc.accuracy(m.genome));
}

TEST_CASE("nested consistency: archived IOE results replay exactly") {
    SpaceConfig cfg = toy_space();
    SynthSpec spec = SynthSpec::maestro_3cu();
    Platform platform = platform_from_synth(spec);
    CostTable table = synth_profile(4, spec, cfg);
    OoeConfig ooe = toy_ooe(8, 3);
    ooe.ioe.exhaustive_init = ExhaustiveInit::Off;
    CoSearchResult r = co_search(cfg, platform, table, AccuracyModel::surrogate(), ooe, 21);
    REQUIRE(!r.pareto.empty());
    IoeConfig ic = ooe.ioe;
    ic.threads = 1;
    for (const auto &m : r.pareto) {
        CHECK(m.ioe_seed == derive_ioe_seed(21, m.encoding));
        WorkloadPlan plan = expand_architecture(m.genome, cfg.granularity, cfg);
        IoeResult ir = search_mappings(plan, table, platform, ic, m.ioe_seed);
        if (m.best_mapping) {
            CHECK(ir.best_eval.total_latency == m.eval.total_latency);
            CHECK(ir.best_eval.total_energy == m.eval.total_energy);
            CHECK(ir.best_mapping.assignments == m.mapping.assignments);
        } else {
            bool replayed = false;
            for (const auto &c : ir.pareto)
                replayed |= c.latency == m.eval.total_latency && c.energy == m.eval.total_energy &&
                            c.assignments == m.mapping.assignments;
            CHECK(replayed);
        }
    }
}

TEST_CASE("standalone-only search matches co-search on a single-CU platform") {
    SpaceConfig cfg = toy_space();
    Platform platform = testutil::make_platform(1);
    Rng trng(17);
    CostTable table = testutil::random_table(trng, cfg, platform);
    AccuracyModel acc = AccuracyModel::surrogate();
    OoeConfig ooe = toy_ooe(16, 2);

    CoSearchResult nested = co_search(cfg, platform, table, acc, ooe, 9);
    CoSearchResult standalone = standalone_only_search(cfg, platform, table, acc, ooe, 0, 9);
    REQUIRE(nested.pareto.size() == standalone.pareto.size());
    for (std::size_t i = 0; i < nested.pareto.size(); ++i) {
        CHECK(nested.pareto[i].eval.total_latency ==
              doctest::Approx(standalone.pareto[i].eval.total_latency));
        CHECK(nested.pareto[i].eval.total_energy == doctest::Approx(standalone.pareto[i].eval.total_energy));
        CHECK(nested.pareto[i].encoding == standalone.pareto[i].encoding);
    }
    CHECK(standalone.eval_count == standalone.genomes_evaluated);
    CHECK_THROWS_AS((void)standalone_only_search(cfg, platform, table, acc, ooe, 5, 9), ValidationError);
}

TEST_CASE("zero generations archive the initial population only") {
    SpaceConfig cfg = toy_space();
    SynthSpec spec = SynthSpec::xavier_like();
    Platform platform = platform_from_synth(spec);
    CostTable table = synth_profile(6, spec, cfg);
    OoeConfig ooe = toy_ooe(6, 0);
    CoSearchResult r = co_search(cfg, platform, table, AccuracyModel::surrogate(), ooe, 33);
    CHECK(r.history.size() == 1);
    CHECK(r.genomes_evaluated <= 6);
}

TEST_CASE("accuracy/efficiency tension fills the archive with both leanings") {
    SpaceConfig cfg = toy_space(); // ops restricted to {Gin, EdgeConv}
    SynthSpec spec = SynthSpec::xavier_like();
    Platform platform = platform_from_synth(spec);
    CostTable table = synth_profile(8, spec, cfg);
    OoeConfig ooe = toy_ooe(16, 4);
    CoSearchResult r = co_search(cfg, platform, table, AccuracyModel::surrogate(), ooe, 41);
    REQUIRE(r.pareto.size() >= 2);
    const CoSearchMember *best_acc = &r.pareto[0];
    const CoSearchMember *best_energy = &r.pareto[0];
    for (const auto &m : r.pareto) {
        if (m.accuracy > best_acc->accuracy) best_acc = &m;
        if (m.eval.total_energy < best_energy->eval.total_energy) best_energy = &m;
    }
    CHECK(best_acc->accuracy > best_energy->accuracy);
    CHECK(best_energy->eval.total_energy < best_acc->eval.total_energy);
    // the accuracy-leaning end carries EdgeConv blocks, the energy-leaning end GIN
    bool acc_has_edge = false, energy_has_gin = false;
    for (const auto &sb : best_acc->genome.superblocks) acc_has_edge |= sb.graph_op == GraphOp::EdgeConv;
    for (const auto &sb : best_energy->genome.superblocks) energy_has_gin |= sb.graph_op == GraphOp::Gin;
    CHECK(acc_has_edge);
    CHECK(energy_has_gin);
}

TEST_CASE("co-search is deterministic, and thread count does not matter") {
    SpaceConfig cfg = toy_space();
    SynthSpec spec = SynthSpec::maestro_3cu();
    Platform platform = platform_from_synth(spec);
    CostTable table = synth_profile(10, spec, cfg);
    OoeConfig ooe = toy_ooe(10, 3);
    CoSearchResult a = co_search(cfg, platform, table, AccuracyModel::surrogate(), ooe, 55);
    CoSearchResult b = co_search(cfg, platform, table, AccuracyModel::surrogate(), ooe, 55);
    OoeConfig threaded = ooe;
    threaded.threads = 8;
    CoSearchResult c = co_search(cfg, platform, table, AccuracyModel::surrogate(), threaded, 55);
    REQUIRE(a.pareto.size() == b.pareto.size());
    REQUIRE(a.pareto.size() == c.pareto.size());
    for (std::size_t i = 0; i < a.pareto.size(); ++i) {
        CHECK(a.pareto[i].encoding == b.pareto[i].encoding);
        CHECK(a.pareto[i].encoding == c.pareto[i].encoding);
        CHECK(a.pareto[i].eval.total_latency == c.pareto[i].eval.total_latency);
    }
    CHECK(a.eval_count == c.eval_count);
}

TEST_CASE("[ooe] config parsing") {
    Ini ini = Ini::parse_string("[ooe]\n"
                                "population = 40\n"
                                "generations = 12\n"
                                "elite_fraction = 0.25\n"
                                "weights = 1, 0.5, 2\n"
                                "[ioe]\n"
                                "population = 50\n",
                                "t.ini");
    OoeConfig cfg = OoeConfig::from_ini(ini);
    CHECK(cfg.population == 40);
    CHECK(cfg.generations == 12);
    CHECK(cfg.elite_fraction == doctest::Approx(0.25));
    CHECK(cfg.w_lat == doctest::Approx(0.5));
    CHECK(cfg.ioe.population == 50);

    OoeConfig bad;
    bad.elite_fraction = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    CHECK_THROWS_AS((void)OoeConfig::from_ini(Ini::parse_string("[ooe]\nweights = 1, 2\n", "t")), ValidationError);
}
