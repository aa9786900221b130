#pragma once

#include <optional>
#include <string>
#include <vector>

#include "archmap/common.hpp"
#include "archmap/config.hpp"

namespace archmap {

enum class GraphOp { MaxRelative = 0, EdgeConv = 1, GraphSage = 2, Gin = 3 };
enum class BackboneKind { Isotropic, Pyramid };
enum class Granularity { Blockwise, Layerwise };

const char *graph_op_name(GraphOp op);       // "max_relative", "edgeconv", ...
char graph_op_letter(GraphOp op);            // M, E, S, G
GraphOp graph_op_from_name(const std::string &name);
GraphOp graph_op_from_letter(char letter);

const char *backbone_name(BackboneKind kind);
const char *granularity_name(Granularity g);
Granularity granularity_from_name(const std::string &name);

// One searchable gene bundle shared by all ViG blocks of a superblock.
struct SuperblockGenes {
    int depth = 4;
    GraphOp graph_op = GraphOp::MaxRelative;
    bool fc_pre_use = true;
    bool ffn_use = true;
    int ffn_width = 192;

    bool operator==(const SuperblockGenes &) const = default;
};

struct ArchitectureGenome {
    std::vector<SuperblockGenes> superblocks;
    BackboneKind backbone = BackboneKind::Isotropic;

    bool operator==(const ArchitectureGenome &) const = default;

    std::string ops_summary() const;   // e.g. "G-M-G-G"
    double ffn_use_pct() const;        // share of superblocks with FFN modules
    double fc_pre_pct() const;
};

// Per-superblock dimensional signature: graph size N, feature dim D, and the
// K-nearest-neighbor degree used by that stage's graph operations.
struct StageDims {
    int nodes = 196;
    int dim = 320;
    int k = 16;
};

struct SpaceConfig {
    int superblock_count = 4;
    std::vector<int> depth_values{2, 3, 4};
    std::vector<GraphOp> op_values{GraphOp::MaxRelative, GraphOp::EdgeConv, GraphOp::GraphSage, GraphOp::Gin};
    std::vector<int> fc_pre_values{0, 1};
    std::vector<int> ffn_use_values{0, 1};
    std::vector<int> width_values{96, 192, 320};
    BackboneKind backbone = BackboneKind::Isotropic;
    std::vector<StageDims> stage_dims; // one entry per superblock
    int input_resolution = 224;
    int num_classes = 10;
    Granularity granularity = Granularity::Blockwise;

    static SpaceConfig defaults();                 // Table-1-style space, isotropic N=196/D=320, K=12..24
    static SpaceConfig pyramid_synthetic();        // synthetic quartering-N / doubling-D schedule
    static SpaceConfig from_ini(const Ini &ini);   // [archspace] section
    void validate() const;
};

enum class UnitKind {
    Stem = 0,
    Grapher,
    Ffn,
    Classifier,
    GrapherPre,
    GrapherAgg,
    GrapherComb,
    GrapherPost,
    FfnFc1,
    FfnFc2,
};
inline constexpr int kUnitKindCount = 10;

const char *unit_kind_name(UnitKind k);
UnitKind unit_kind_from_name(const std::string &name);
bool is_layer_grained(UnitKind k);

// Cost-model identity of one mappable unit. Fields not applicable to a kind
// stay at their sentinel (-1 / 0) and serialize as '-'.
struct UnitSignature {
    UnitKind kind = UnitKind::Stem;
    int superblock_index = -1;            // -1 for stem/classifier
    std::optional<GraphOp> graph_op;      // grapher-family kinds only
    int nodes = 0;
    int dim = 0;
    int k_neighbors = 0;                  // 0 when not applicable
    int ffn_width = 0;                    // FFN kinds; stem: input res, classifier: class count
    int fc_pre = -1;                      // blockwise Grapher only: 0/1

    bool operator==(const UnitSignature &) const = default;

    // Canonical whitespace-free key, also the row prefix in cost-table files.
    std::string canonical_key() const;
};

struct WorkloadPlan {
    std::vector<UnitSignature> units;
    Granularity granularity = Granularity::Blockwise;
    ArchitectureGenome genome;
};

// Structural checks from the plan contract (stem/classifier bookends,
// Grapher->FFN alternation, isotropic/pyramid dimension discipline).
void validate_plan(const WorkloadPlan &plan);

BigCount genome_space_cardinality(const SpaceConfig &config);
BigCount mapping_space_cardinality(const WorkloadPlan &plan, int num_cus);

WorkloadPlan expand_architecture(const ArchitectureGenome &genome, Granularity granularity,
                                 const SpaceConfig &dims);

// Flat encoding, one slot per gene per superblock in the order
// (depth, graph_op, fc_pre_use, ffn_use, ffn_width); raw values, not indices.
std::vector<int> encode_genome(const ArchitectureGenome &genome);
ArchitectureGenome decode_genome(const std::vector<int> &enc, BackboneKind backbone);

ArchitectureGenome random_genome(const SpaceConfig &config, Rng &rng);
void mutate_genome(ArchitectureGenome &genome, const SpaceConfig &config, Rng &rng, double per_gene_prob);
// Uniform superblock-swap crossover; children are the two mask complements.
std::pair<ArchitectureGenome, ArchitectureGenome> crossover_genomes(const ArchitectureGenome &a,
                                                                    const ArchitectureGenome &b, Rng &rng);

// Whole-space enumeration for oracle-scale instances; refuses above `cap`.
std::vector<ArchitectureGenome> enumerate_space(const SpaceConfig &config, std::size_t cap = 1u << 16);

// Compact notation: "ops=G-M-G-G;d=4,4,4,4;ffn=1,0,1,1;pre=0,0,0,0;w=192,192,96,320"
std::string genome_to_string(const ArchitectureGenome &genome);
ArchitectureGenome parse_genome_string(const std::string &text, BackboneKind backbone);

} // namespace archmap
