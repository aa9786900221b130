#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "archmap/archspace.hpp"

using namespace archmap;

namespace {

ArchitectureGenome uniform_genome(const SpaceConfig &cfg, int depth, GraphOp op, bool pre, bool ffn, int width) {
    ArchitectureGenome g;
    g.backbone = cfg.backbone;
    for (int i = 0; i < cfg.superblock_count; ++i) g.superblocks.push_back({depth, op, pre, ffn, width});
    return g;
}

int count_kind(const WorkloadPlan &plan, UnitKind kind) {
    int n = 0;
    for (const auto &u : plan.units) n += u.kind == kind ? 1 : 0;
    return n;
}

} // namespace

TEST_CASE("genome space cardinality matches the per-gene product") {
    // 3 depths x 4 ops x 2 pre x 2 ffn x 3 widths = 144 per superblock, ^4
    CHECK(big_to_string(genome_space_cardinality(SpaceConfig::defaults())) == "429981696");

    SpaceConfig single;
    single.superblock_count = 1;
    single.depth_values = {2};
    single.op_values = {GraphOp::Gin};
    single.fc_pre_values = {1};
    single.ffn_use_values = {1};
    single.width_values = {96};
    single.stage_dims = {{196, 320, 12}};
    CHECK(big_to_string(genome_space_cardinality(single)) == "1");

    SpaceConfig two = single;
    two.superblock_count = 2;
    two.depth_values = {2, 3};
    two.stage_dims = {{196, 320, 12}, {196, 320, 16}};
    CHECK(big_to_string(genome_space_cardinality(two)) == "4");

    SpaceConfig broken = SpaceConfig::defaults();
    broken.width_values.clear();
    CHECK_THROWS_WITH_AS((void)genome_space_cardinality(broken), doctest::Contains("empty value set"),
                         ValidationError);
}

TEST_CASE("blockwise expansion of the full-depth genome yields 34 units") {
    SpaceConfig cfg = SpaceConfig::defaults();
    ArchitectureGenome g = uniform_genome(cfg, 4, GraphOp::MaxRelative, true, true, 192);
    WorkloadPlan plan = expand_architecture(g, Granularity::Blockwise, cfg);
    CHECK(plan.units.size() == 34);
    CHECK(count_kind(plan, UnitKind::Grapher) == 16);
    CHECK(count_kind(plan, UnitKind::Ffn) == 16);
    CHECK(plan.units.front().kind == UnitKind::Stem);
    CHECK(plan.units.back().kind == UnitKind::Classifier);
    // K schedule carried per superblock
    CHECK(plan.units[1].k_neighbors == 12);
    CHECK(plan.units[33 - 1 - 1].k_neighbors == 24);
}

TEST_CASE("blockwise expansion without FFN modules") {
    SpaceConfig cfg = SpaceConfig::defaults();
    ArchitectureGenome g = uniform_genome(cfg, 2, GraphOp::Gin, false, false, 96);
    WorkloadPlan plan = expand_architecture(g, Granularity::Blockwise, cfg);
    CHECK(plan.units.size() == 10); // stem + 8 graphers + classifier
    CHECK(count_kind(plan, UnitKind::Ffn) == 0);
}

TEST_CASE("layerwise expansion of a one-block genome") {
    SpaceConfig cfg = SpaceConfig::defaults();
    cfg.superblock_count = 1;
    cfg.stage_dims = {{196, 320, 12}};
    cfg.depth_values = {1}; // test-only depth
    ArchitectureGenome g = uniform_genome(cfg, 1, GraphOp::EdgeConv, false, true, 192);
    WorkloadPlan plan = expand_architecture(g, Granularity::Layerwise, cfg);
    REQUIRE(plan.units.size() == 7);
    CHECK(plan.units[0].kind == UnitKind::Stem);
    CHECK(plan.units[1].kind == UnitKind::GrapherAgg);
    CHECK(plan.units[2].kind == UnitKind::GrapherComb);
    CHECK(plan.units[3].kind == UnitKind::GrapherPost);
    CHECK(plan.units[4].kind == UnitKind::FfnFc1);
    CHECK(plan.units[5].kind == UnitKind::FfnFc2);
    CHECK(plan.units[6].kind == UnitKind::Classifier);
    CHECK(plan.units[1].graph_op == GraphOp::EdgeConv);
    CHECK(plan.units[4].ffn_width == 192);
    CHECK_FALSE(plan.units[3].graph_op.has_value());
}

TEST_CASE("unit count formulas hold over an enumerated reduced space") {
    SpaceConfig cfg = SpaceConfig::defaults();
    cfg.superblock_count = 2;
    cfg.depth_values = {1, 2, 3};
    cfg.op_values = {GraphOp::MaxRelative};
    cfg.width_values = {96};
    cfg.stage_dims = {{196, 320, 12}, {196, 320, 16}};
    for (const auto &g : enumerate_space(cfg)) {
        long long blockwise_expect = 2, layerwise_expect = 2;
        for (const auto &sb : g.superblocks) {
            blockwise_expect += sb.depth * (1 + (sb.ffn_use ? 1 : 0));
            layerwise_expect += sb.depth * ((3 + (sb.fc_pre_use ? 1 : 0)) + 2 * (sb.ffn_use ? 1 : 0));
        }
        CHECK(static_cast<long long>(expand_architecture(g, Granularity::Blockwise, cfg).units.size()) ==
              blockwise_expect);
        CHECK(static_cast<long long>(expand_architecture(g, Granularity::Layerwise, cfg).units.size()) ==
              layerwise_expect);
    }
}

TEST_CASE("expansion is deterministic and isotropic plans share one (N, D)") {
    SpaceConfig cfg = SpaceConfig::defaults();
    Rng rng(42);
    for (int t = 0; t < 30; ++t) {
        ArchitectureGenome g = random_genome(cfg, rng);
        WorkloadPlan p1 = expand_architecture(g, Granularity::Blockwise, cfg);
        WorkloadPlan p2 = expand_architecture(g, Granularity::Blockwise, cfg);
        REQUIRE(p1.units.size() == p2.units.size());
        for (std::size_t i = 0; i < p1.units.size(); ++i) CHECK(p1.units[i] == p2.units[i]);
        for (const auto &u : p1.units) {
            CHECK(u.nodes == 196);
            CHECK(u.dim == 320);
        }
    }
}

TEST_CASE("pyramid plans have non-increasing node counts") {
    SpaceConfig cfg = SpaceConfig::pyramid_synthetic();
    ArchitectureGenome g = uniform_genome(cfg, 2, GraphOp::Gin, true, true, 192);
    WorkloadPlan plan = expand_architecture(g, Granularity::Blockwise, cfg);
    int prev = plan.units[1].nodes;
    for (std::size_t i = 1; i + 1 < plan.units.size(); ++i) {
        CHECK(plan.units[i].nodes <= prev);
        prev = plan.units[i].nodes;
    }
    SpaceConfig bad = cfg;
    bad.stage_dims[2].nodes = 100000;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("dimension schedule length must match the superblock count") {
    SpaceConfig cfg = SpaceConfig::defaults();
    cfg.stage_dims.pop_back();
    ArchitectureGenome g;
    for (int i = 0; i < 4; ++i) g.superblocks.push_back({2, GraphOp::Gin, true, true, 96});
    CHECK_THROWS_WITH_AS((void)expand_architecture(g, Granularity::Blockwise, cfg),
                         doctest::Contains("schedule length"), ValidationError);
}

TEST_CASE("mapping space cardinality") {
    SpaceConfig cfg = SpaceConfig::defaults();
    WorkloadPlan plan34 =
        expand_architecture(uniform_genome(cfg, 4, GraphOp::MaxRelative, true, true, 192), Granularity::Blockwise, cfg);
    REQUIRE(plan34.units.size() == 34);
    CHECK(big_to_string(mapping_space_cardinality(plan34, 2)) == "17179869184");   // 2^34
    CHECK(big_to_string(mapping_space_cardinality(plan34, 3)) == "16677181699666569"); // 3^34 ~ 1.67e16

    SpaceConfig one = cfg;
    one.superblock_count = 1;
    one.depth_values = {1};
    one.stage_dims = {{196, 320, 12}};
    WorkloadPlan tiny =
        expand_architecture(uniform_genome(one, 1, GraphOp::Gin, false, false, 96), Granularity::Blockwise, one);
    // a 3-unit plan on 1 CU still has exactly one mapping
    CHECK(big_to_string(mapping_space_cardinality(tiny, 1)) == "1");
    CHECK_THROWS_AS((void)mapping_space_cardinality(tiny, 0), ValidationError);
}

TEST_CASE("genome encode/decode round-trip is exact") {
    SpaceConfig cfg = SpaceConfig::defaults();
    Rng rng(9);
    for (int t = 0; t < 200; ++t) {
        ArchitectureGenome g = random_genome(cfg, rng);
        CHECK(decode_genome(encode_genome(g), g.backbone) == g);
    }
    CHECK_THROWS_AS((void)decode_genome({1, 2, 3}, BackboneKind::Isotropic), ValidationError);
    CHECK_THROWS_AS((void)decode_genome({2, 9, 0, 0, 96}, BackboneKind::Isotropic), ValidationError);
}

TEST_CASE("genome string round-trip and worked example") {
    std::string text = "ops=G-M-G-G;d=4,4,4,4;ffn=1,0,1,1;pre=0,0,0,0;w=192,192,96,320";
    ArchitectureGenome g = parse_genome_string(text, BackboneKind::Isotropic);
    REQUIRE(g.superblocks.size() == 4);
    CHECK(g.superblocks[0].graph_op == GraphOp::Gin);
    CHECK(g.superblocks[1].graph_op == GraphOp::MaxRelative);
    CHECK(g.superblocks[1].ffn_use == false);
    CHECK(g.superblocks[2].ffn_width == 96);
    CHECK(g.superblocks[3].ffn_width == 320);
    CHECK(genome_to_string(g) == text);
    CHECK(g.ops_summary() == "G-M-G-G");
    CHECK(g.ffn_use_pct() == doctest::Approx(75.0));
    CHECK(g.fc_pre_pct() == doctest::Approx(0.0));
}

TEST_CASE("malformed genome strings fail with a column position") {
    CHECK_THROWS_WITH_AS((void)parse_genome_string("ops=G-M;d=4,4;ffn=1,1;pre=0,0;w=192,oops", BackboneKind::Isotropic),
                         doctest::Contains("column"), ValidationError);
    CHECK_THROWS_WITH_AS((void)parse_genome_string("d=4,4", BackboneKind::Isotropic), doctest::Contains("ops"),
                         ValidationError);
    CHECK_THROWS_AS((void)parse_genome_string("ops=G-Q", BackboneKind::Isotropic), ValidationError);
    CHECK_THROWS_AS((void)parse_genome_string("ops=G-M;d=4", BackboneKind::Isotropic), ValidationError);
}

TEST_CASE("space enumeration covers each genome exactly once") {
    SpaceConfig cfg = SpaceConfig::defaults();
    cfg.superblock_count = 2;
    cfg.depth_values = {2, 3};
    cfg.op_values = {GraphOp::Gin, GraphOp::GraphSage};
    cfg.fc_pre_values = {0};
    cfg.ffn_use_values = {1};
    cfg.width_values = {192};
    cfg.stage_dims = {{196, 320, 12}, {196, 320, 16}};
    auto all = enumerate_space(cfg);
    CHECK(all.size() == 16);
    std::set<std::string> uniq;
    for (const auto &g : all) uniq.insert(genome_to_string(g));
    CHECK(uniq.size() == all.size());
    CHECK_THROWS_AS((void)enumerate_space(SpaceConfig::defaults(), 1000), BudgetError);
}

TEST_CASE("mutation stays within configured value sets, crossover swaps whole superblocks") {
    SpaceConfig cfg = SpaceConfig::defaults();
    Rng rng(31);
    for (int t = 0; t < 100; ++t) {
        ArchitectureGenome g = random_genome(cfg, rng);
        mutate_genome(g, cfg, rng, 0.7);
        for (const auto &sb : g.superblocks) {
            CHECK(std::count(cfg.depth_values.begin(), cfg.depth_values.end(), sb.depth) == 1);
            CHECK(std::count(cfg.width_values.begin(), cfg.width_values.end(), sb.ffn_width) == 1);
        }
    }
    ArchitectureGenome a = random_genome(cfg, rng);
    ArchitectureGenome b = random_genome(cfg, rng);
    auto [c1, c2] = crossover_genomes(a, b, rng);
    for (std::size_t i = 0; i < a.superblocks.size(); ++i) {
        bool kept = c1.superblocks[i] == a.superblocks[i] && c2.superblocks[i] == b.superblocks[i];
        bool swapped = c1.superblocks[i] == b.superblocks[i] && c2.superblocks[i] == a.superblocks[i];
        CHECK((kept || swapped));
    }
}

TEST_CASE("[archspace] config parsing") {
    Ini ini = Ini::parse_string("[archspace]\n"
                                "superblocks = 2\n"
                                "depth_values = 2, 3\n"
                                "op_values = gin, graphsage\n"
                                "width_values = 96\n"
                                "k_schedule = 10, 14\n"
                                "nodes = 49\n"
                                "dim = 128\n"
                                "granularity = layerwise\n",
                                "t.ini");
    SpaceConfig cfg = SpaceConfig::from_ini(ini);
    CHECK(cfg.superblock_count == 2);
    CHECK(cfg.depth_values == std::vector<int>{2, 3});
    CHECK(cfg.op_values == std::vector<GraphOp>{GraphOp::Gin, GraphOp::GraphSage});
    CHECK(cfg.stage_dims[1].k == 14);
    CHECK(cfg.stage_dims[0].nodes == 49);
    CHECK(cfg.stage_dims[0].dim == 128);
    CHECK(cfg.granularity == Granularity::Layerwise);

    Ini bad = Ini::parse_string("[archspace]\nsuperblocks = 2\nk_schedule = 1\n", "t.ini");
    CHECK_THROWS_AS((void)SpaceConfig::from_ini(bad), ValidationError);
}
