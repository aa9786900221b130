#include "archmap/archspace.hpp"

#include <algorithm>
#include <sstream>

namespace archmap {

const char *graph_op_name(GraphOp op) {
    switch (op) {
    case GraphOp::MaxRelative: return "max_relative";
    case GraphOp::EdgeConv: return "edgeconv";
    case GraphOp::GraphSage: return "graphsage";
    case GraphOp::Gin: return "gin";
    }
    throw ValidationError("unknown graph op value");
}

char graph_op_letter(GraphOp op) {
    switch (op) {
    case GraphOp::MaxRelative: return 'M';
    case GraphOp::EdgeConv: return 'E';
    case GraphOp::GraphSage: return 'S';
    case GraphOp::Gin: return 'G';
    }
    throw ValidationError("unknown graph op value");
}

GraphOp graph_op_from_name(const std::string &name) {
    std::string n = to_lower(name);
    if (n == "max_relative" || n == "max-relative" || n == "mrconv") return GraphOp::MaxRelative;
    if (n == "edgeconv") return GraphOp::EdgeConv;
    if (n == "graphsage" || n == "sage") return GraphOp::GraphSage;
    if (n == "gin") return GraphOp::Gin;
    throw ValidationError("unknown graph op '" + name + "' (expected max_relative|edgeconv|graphsage|gin)");
}

GraphOp graph_op_from_letter(char letter) {
    switch (letter) {
    case 'M': return GraphOp::MaxRelative;
    case 'E': return GraphOp::EdgeConv;
    case 'S': return GraphOp::GraphSage;
    case 'G': return GraphOp::Gin;
    default:
        throw ValidationError(std::string("unknown graph op letter '") + letter + "' (expected M|E|S|G)");
    }
}

const char *backbone_name(BackboneKind kind) {
    return kind == BackboneKind::Isotropic ? "isotropic" : "pyramid";
}

const char *granularity_name(Granularity g) {
    return g == Granularity::Blockwise ? "blockwise" : "layerwise";
}

Granularity granularity_from_name(const std::string &name) {
    std::string n = to_lower(name);
    if (n == "blockwise") return Granularity::Blockwise;
    if (n == "layerwise") return Granularity::Layerwise;
    throw ValidationError("unknown granularity '" + name + "' (expected blockwise|layerwise)");
}

std::string ArchitectureGenome::ops_summary() const {
    std::string out;
    for (std::size_t i = 0; i < superblocks.size(); ++i) {
        if (i) out.push_back('-');
        out.push_back(graph_op_letter(superblocks[i].graph_op));
    }
    return out;
}

double ArchitectureGenome::ffn_use_pct() const {
    if (superblocks.empty()) return 0.0;
    int n = 0;
    for (const auto &sb : superblocks) n += sb.ffn_use ? 1 : 0;
    return 100.0 * n / static_cast<double>(superblocks.size());
}

double ArchitectureGenome::fc_pre_pct() const {
    if (superblocks.empty()) return 0.0;
    int n = 0;
    for (const auto &sb : superblocks) n += sb.fc_pre_use ? 1 : 0;
    return 100.0 * n / static_cast<double>(superblocks.size());
}

SpaceConfig SpaceConfig::defaults() {
    SpaceConfig cfg;
    cfg.stage_dims = {{196, 320, 12}, {196, 320, 16}, {196, 320, 20}, {196, 320, 24}};
    return cfg;
}

SpaceConfig SpaceConfig::pyramid_synthetic() {
    SpaceConfig cfg = defaults();
    cfg.backbone = BackboneKind::Pyramid;
    // Synthetic quartering-N / doubling-D schedule; not a published model.
    cfg.stage_dims = {{3136, 96, 12}, {784, 192, 16}, {196, 384, 20}, {49, 768, 24}};
    return cfg;
}

void SpaceConfig::validate() const {
    if (superblock_count < 1) throw ValidationError("[archspace] superblock count must be >= 1");
    auto check_nonempty = [](const auto &vals, const char *gene) {
        if (vals.empty()) throw ValidationError(std::string("[archspace] empty value set for gene '") + gene + "'");
    };
    check_nonempty(depth_values, "depth");
    check_nonempty(op_values, "graph_op");
    check_nonempty(fc_pre_values, "fc_pre_use");
    check_nonempty(ffn_use_values, "ffn_use");
    check_nonempty(width_values, "ffn_width");
    for (int d : depth_values)
        if (d < 1) throw ValidationError("[archspace] depth values must be >= 1");
    for (int w : width_values)
        if (w < 1) throw ValidationError("[archspace] width values must be >= 1");
    for (int v : fc_pre_values)
        if (v != 0 && v != 1) throw ValidationError("[archspace] fc_pre values must be 0/1");
    for (int v : ffn_use_values)
        if (v != 0 && v != 1) throw ValidationError("[archspace] ffn_use values must be 0/1");
    if (static_cast<int>(stage_dims.size()) != superblock_count)
        throw ValidationError("[archspace] dimension schedule length " + std::to_string(stage_dims.size()) +
                              " != superblock count " + std::to_string(superblock_count));
    for (const auto &sd : stage_dims)
        if (sd.nodes < 1 || sd.dim < 1 || sd.k < 1)
            throw ValidationError("[archspace] stage dims must be positive (nodes/dim/k)");
    if (backbone == BackboneKind::Pyramid) {
        for (std::size_t i = 1; i < stage_dims.size(); ++i)
            if (stage_dims[i].nodes > stage_dims[i - 1].nodes)
                throw ValidationError("[archspace] pyramid node schedule must be non-increasing");
    } else {
        for (std::size_t i = 1; i < stage_dims.size(); ++i)
            if (stage_dims[i].nodes != stage_dims[0].nodes || stage_dims[i].dim != stage_dims[0].dim)
                throw ValidationError("[archspace] isotropic backbone requires a constant (nodes, dim) schedule");
    }
    if (input_resolution < 1 || num_classes < 1)
        throw ValidationError("[archspace] input_resolution and classes must be >= 1");
}

SpaceConfig SpaceConfig::from_ini(const Ini &ini) {
    const std::string sec = "archspace";
    std::string preset = to_lower(ini.get_string(sec, "preset", ""));
    SpaceConfig cfg;
    if (preset.empty() || preset == "default" || preset == "isotropic")
        cfg = defaults();
    else if (preset == "pyramid-synthetic")
        cfg = pyramid_synthetic();
    else
        throw ValidationError("[archspace] unknown preset '" + preset + "' (expected default|pyramid-synthetic)");

    cfg.superblock_count = static_cast<int>(ini.get_int(sec, "superblocks", cfg.superblock_count));
    if (ini.has(sec, "depth_values")) {
        cfg.depth_values.clear();
        for (long long v : ini.get_int_list(sec, "depth_values")) cfg.depth_values.push_back(static_cast<int>(v));
    }
    if (ini.has(sec, "op_values")) {
        cfg.op_values.clear();
        for (const auto &tok : ini.get_list(sec, "op_values")) cfg.op_values.push_back(graph_op_from_name(tok));
    }
    if (ini.has(sec, "fc_pre_values")) {
        cfg.fc_pre_values.clear();
        for (long long v : ini.get_int_list(sec, "fc_pre_values")) cfg.fc_pre_values.push_back(static_cast<int>(v));
    }
    if (ini.has(sec, "ffn_use_values")) {
        cfg.ffn_use_values.clear();
        for (long long v : ini.get_int_list(sec, "ffn_use_values")) cfg.ffn_use_values.push_back(static_cast<int>(v));
    }
    if (ini.has(sec, "width_values")) {
        cfg.width_values.clear();
        for (long long v : ini.get_int_list(sec, "width_values")) cfg.width_values.push_back(static_cast<int>(v));
    }
    if (ini.has(sec, "backbone")) {
        std::string b = to_lower(ini.require_string(sec, "backbone"));
        if (b == "isotropic") cfg.backbone = BackboneKind::Isotropic;
        else if (b == "pyramid") cfg.backbone = BackboneKind::Pyramid;
        else throw ValidationError("[archspace] unknown backbone '" + b + "'");
    }
    cfg.granularity = granularity_from_name(ini.get_string(sec, "granularity", granularity_name(cfg.granularity)));
    cfg.input_resolution = static_cast<int>(ini.get_int(sec, "input_resolution", cfg.input_resolution));
    cfg.num_classes = static_cast<int>(ini.get_int(sec, "classes", cfg.num_classes));

    // Dimension schedule: scalar nodes/dim for isotropic, or explicit lists.
    std::vector<long long> nodes_sched = ini.get_int_list(sec, "nodes_schedule");
    std::vector<long long> dim_sched = ini.get_int_list(sec, "dim_schedule");
    std::vector<long long> k_sched = ini.get_int_list(sec, "k_schedule");
    long long nodes_scalar = ini.get_int(sec, "nodes", 0);
    long long dim_scalar = ini.get_int(sec, "dim", 0);

    bool any_dim_key = !nodes_sched.empty() || !dim_sched.empty() || !k_sched.empty() || nodes_scalar || dim_scalar;
    if (any_dim_key || static_cast<int>(cfg.stage_dims.size()) != cfg.superblock_count) {
        std::vector<StageDims> dims(cfg.superblock_count);
        for (int i = 0; i < cfg.superblock_count; ++i) {
            StageDims base = (i < static_cast<int>(cfg.stage_dims.size())) ? cfg.stage_dims[i]
                             : StageDims{196, 320, 12 + 4 * i};
            if (nodes_scalar) base.nodes = static_cast<int>(nodes_scalar);
            if (dim_scalar) base.dim = static_cast<int>(dim_scalar);
            if (!nodes_sched.empty()) {
                if (static_cast<int>(nodes_sched.size()) != cfg.superblock_count)
                    throw ValidationError("[archspace] nodes_schedule length != superblock count");
                base.nodes = static_cast<int>(nodes_sched[i]);
            }
            if (!dim_sched.empty()) {
                if (static_cast<int>(dim_sched.size()) != cfg.superblock_count)
                    throw ValidationError("[archspace] dim_schedule length != superblock count");
                base.dim = static_cast<int>(dim_sched[i]);
            }
            if (!k_sched.empty()) {
                if (static_cast<int>(k_sched.size()) != cfg.superblock_count)
                    throw ValidationError("[archspace] k_schedule length != superblock count");
                base.k = static_cast<int>(k_sched[i]);
            }
            dims[i] = base;
        }
        cfg.stage_dims = std::move(dims);
    }
    cfg.validate();
    return cfg;
}

const char *unit_kind_name(UnitKind k) {
    switch (k) {
    case UnitKind::Stem: return "stem";
    case UnitKind::Grapher: return "grapher";
    case UnitKind::Ffn: return "ffn";
    case UnitKind::Classifier: return "classifier";
    case UnitKind::GrapherPre: return "grapher_pre";
    case UnitKind::GrapherAgg: return "grapher_agg";
    case UnitKind::GrapherComb: return "grapher_comb";
    case UnitKind::GrapherPost: return "grapher_post";
    case UnitKind::FfnFc1: return "ffn_fc1";
    case UnitKind::FfnFc2: return "ffn_fc2";
    }
    throw ValidationError("unknown unit kind value");
}

UnitKind unit_kind_from_name(const std::string &name) {
    std::string n = to_lower(name);
    for (int i = 0; i < kUnitKindCount; ++i) {
        auto k = static_cast<UnitKind>(i);
        if (n == unit_kind_name(k)) return k;
    }
    throw ValidationError("unknown unit kind '" + name + "'");
}

bool is_layer_grained(UnitKind k) {
    switch (k) {
    case UnitKind::GrapherPre:
    case UnitKind::GrapherAgg:
    case UnitKind::GrapherComb:
    case UnitKind::GrapherPost:
    case UnitKind::FfnFc1:
    case UnitKind::FfnFc2: return true;
    default: return false;
    }
}

std::string UnitSignature::canonical_key() const {
    std::ostringstream out;
    out << unit_kind_name(kind) << ':';
    if (superblock_index >= 0) out << superblock_index;
    else out << '-';
    out << ':';
    if (graph_op) out << graph_op_name(*graph_op);
    else out << '-';
    out << ':' << nodes << ':' << dim << ':';
    if (k_neighbors > 0) out << k_neighbors;
    else out << '-';
    out << ':';
    if (ffn_width > 0) out << ffn_width;
    else out << '-';
    out << ':';
    if (fc_pre >= 0) out << fc_pre;
    else out << '-';
    return out.str();
}

void validate_plan(const WorkloadPlan &plan) {
    if (plan.units.size() < 2) throw ValidationError("plan must contain at least stem and classifier");
    if (plan.units.front().kind != UnitKind::Stem) throw ValidationError("plan must start with a stem unit");
    if (plan.units.back().kind != UnitKind::Classifier) throw ValidationError("plan must end with a classifier unit");
    for (std::size_t i = 0; i < plan.units.size(); ++i) {
        const UnitSignature &u = plan.units[i];
        if (u.nodes < 1 || u.dim < 1) throw ValidationError("unit " + std::to_string(i) + ": nodes/dim must be >= 1");
        bool layer = is_layer_grained(u.kind);
        if (plan.granularity == Granularity::Blockwise && layer)
            throw ValidationError("layer-grained unit in blockwise plan at index " + std::to_string(i));
        if (plan.granularity == Granularity::Layerwise && (u.kind == UnitKind::Grapher || u.kind == UnitKind::Ffn))
            throw ValidationError("block-grained unit in layerwise plan at index " + std::to_string(i));
        if (plan.granularity == Granularity::Blockwise && u.kind == UnitKind::Ffn) {
            if (i == 0 || plan.units[i - 1].kind != UnitKind::Grapher)
                throw ValidationError("FFN unit not preceded by a Grapher at index " + std::to_string(i));
        }
    }
    // dimension discipline over the computing units (stem/classifier excluded)
    const UnitSignature *prev = nullptr;
    for (std::size_t i = 1; i + 1 < plan.units.size(); ++i) {
        const UnitSignature &u = plan.units[i];
        if (plan.genome.backbone == BackboneKind::Isotropic) {
            if (prev && (u.nodes != prev->nodes || u.dim != prev->dim))
                throw ValidationError("isotropic plan has varying (nodes, dim) at index " + std::to_string(i));
        } else if (prev && u.nodes > prev->nodes) {
            throw ValidationError("pyramid plan has increasing node count at index " + std::to_string(i));
        }
        prev = &u;
    }
}

BigCount genome_space_cardinality(const SpaceConfig &config) {
    config.validate();
    BigCount per_block = 1;
    per_block = big_mul_checked(per_block, config.depth_values.size(), "genome space");
    per_block = big_mul_checked(per_block, config.op_values.size(), "genome space");
    per_block = big_mul_checked(per_block, config.fc_pre_values.size(), "genome space");
    per_block = big_mul_checked(per_block, config.ffn_use_values.size(), "genome space");
    per_block = big_mul_checked(per_block, config.width_values.size(), "genome space");
    BigCount total = 1;
    for (int i = 0; i < config.superblock_count; ++i)
        total = big_mul_checked(total, per_block, "genome space");
    return total;
}

BigCount mapping_space_cardinality(const WorkloadPlan &plan, int num_cus) {
    if (num_cus < 1) throw ValidationError("mapping_space_cardinality: num_cus must be >= 1");
    BigCount total = 1;
    for (std::size_t i = 0; i < plan.units.size(); ++i)
        total = big_mul_checked(total, static_cast<BigCount>(num_cus), "mapping space");
    return total;
}

static void check_genome_dims(const ArchitectureGenome &genome, const SpaceConfig &dims) {
    if (genome.superblocks.empty()) throw ValidationError("genome has no superblocks");
    if (static_cast<int>(genome.superblocks.size()) != dims.superblock_count)
        throw ValidationError("genome superblock count " + std::to_string(genome.superblocks.size()) +
                              " != configured count " + std::to_string(dims.superblock_count));
    if (static_cast<int>(dims.stage_dims.size()) != dims.superblock_count)
        throw ValidationError("dimension schedule length != superblock count");
    for (const auto &sb : genome.superblocks) {
        if (sb.depth < 1) throw ValidationError("genome depth must be >= 1");
        if (sb.ffn_width < 1) throw ValidationError("genome ffn width must be >= 1");
    }
}

WorkloadPlan expand_architecture(const ArchitectureGenome &genome, Granularity granularity,
                                 const SpaceConfig &dims) {
    check_genome_dims(genome, dims);
    WorkloadPlan plan;
    plan.granularity = granularity;
    plan.genome = genome;

    UnitSignature stem;
    stem.kind = UnitKind::Stem;
    stem.nodes = dims.stage_dims.front().nodes;
    stem.dim = dims.stage_dims.front().dim;
    stem.ffn_width = dims.input_resolution;
    plan.units.push_back(stem);

    for (std::size_t i = 0; i < genome.superblocks.size(); ++i) {
        const SuperblockGenes &sb = genome.superblocks[i];
        const StageDims &sd = dims.stage_dims[i];
        for (int b = 0; b < sb.depth; ++b) {
            if (granularity == Granularity::Blockwise) {
                UnitSignature g;
                g.kind = UnitKind::Grapher;
                g.superblock_index = static_cast<int>(i);
                g.graph_op = sb.graph_op;
                g.nodes = sd.nodes;
                g.dim = sd.dim;
                g.k_neighbors = sd.k;
                g.fc_pre = sb.fc_pre_use ? 1 : 0;
                plan.units.push_back(g);
                if (sb.ffn_use) {
                    UnitSignature f;
                    f.kind = UnitKind::Ffn;
                    f.superblock_index = static_cast<int>(i);
                    f.nodes = sd.nodes;
                    f.dim = sd.dim;
                    f.ffn_width = sb.ffn_width;
                    plan.units.push_back(f);
                }
            } else {
                auto layer = [&](UnitKind kind) {
                    UnitSignature u;
                    u.kind = kind;
                    u.superblock_index = static_cast<int>(i);
                    u.nodes = sd.nodes;
                    u.dim = sd.dim;
                    if (kind == UnitKind::GrapherAgg) {
                        u.graph_op = sb.graph_op;
                        u.k_neighbors = sd.k;
                    } else if (kind == UnitKind::GrapherComb) {
                        u.graph_op = sb.graph_op;
                    } else if (kind == UnitKind::FfnFc1 || kind == UnitKind::FfnFc2) {
                        u.ffn_width = sb.ffn_width;
                    }
                    return u;
                };
                if (sb.fc_pre_use) plan.units.push_back(layer(UnitKind::GrapherPre));
                plan.units.push_back(layer(UnitKind::GrapherAgg));
                plan.units.push_back(layer(UnitKind::GrapherComb));
                plan.units.push_back(layer(UnitKind::GrapherPost));
                if (sb.ffn_use) {
                    plan.units.push_back(layer(UnitKind::FfnFc1));
                    plan.units.push_back(layer(UnitKind::FfnFc2));
                }
            }
        }
    }

    UnitSignature cls;
    cls.kind = UnitKind::Classifier;
    cls.nodes = dims.stage_dims.back().nodes;
    cls.dim = dims.stage_dims.back().dim;
    cls.ffn_width = dims.num_classes;
    plan.units.push_back(cls);

    validate_plan(plan);
    return plan;
}

std::vector<int> encode_genome(const ArchitectureGenome &genome) {
    std::vector<int> enc;
    enc.reserve(genome.superblocks.size() * 5);
    for (const auto &sb : genome.superblocks) {
        enc.push_back(sb.depth);
        enc.push_back(static_cast<int>(sb.graph_op));
        enc.push_back(sb.fc_pre_use ? 1 : 0);
        enc.push_back(sb.ffn_use ? 1 : 0);
        enc.push_back(sb.ffn_width);
    }
    return enc;
}

ArchitectureGenome decode_genome(const std::vector<int> &enc, BackboneKind backbone) {
    if (enc.empty() || enc.size() % 5 != 0)
        throw ValidationError("genome encoding length must be a positive multiple of 5");
    ArchitectureGenome g;
    g.backbone = backbone;
    for (std::size_t i = 0; i < enc.size(); i += 5) {
        SuperblockGenes sb;
        sb.depth = enc[i];
        if (enc[i + 1] < 0 || enc[i + 1] > 3)
            throw ValidationError("genome encoding: invalid graph op slot " + std::to_string(enc[i + 1]));
        sb.graph_op = static_cast<GraphOp>(enc[i + 1]);
        sb.fc_pre_use = enc[i + 2] != 0;
        sb.ffn_use = enc[i + 3] != 0;
        sb.ffn_width = enc[i + 4];
        g.superblocks.push_back(sb);
    }
    return g;
}

template <typename T>
static const T &pick(const std::vector<T> &vals, Rng &rng) {
    std::uniform_int_distribution<std::size_t> dist(0, vals.size() - 1);
    return vals[dist(rng)];
}

ArchitectureGenome random_genome(const SpaceConfig &config, Rng &rng) {
    config.validate();
    ArchitectureGenome g;
    g.backbone = config.backbone;
    for (int i = 0; i < config.superblock_count; ++i) {
        SuperblockGenes sb;
        sb.depth = pick(config.depth_values, rng);
        sb.graph_op = pick(config.op_values, rng);
        sb.fc_pre_use = pick(config.fc_pre_values, rng) != 0;
        sb.ffn_use = pick(config.ffn_use_values, rng) != 0;
        sb.ffn_width = pick(config.width_values, rng);
        g.superblocks.push_back(sb);
    }
    return g;
}

void mutate_genome(ArchitectureGenome &genome, const SpaceConfig &config, Rng &rng, double per_gene_prob) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (auto &sb : genome.superblocks) {
        if (coin(rng) < per_gene_prob) sb.depth = pick(config.depth_values, rng);
        if (coin(rng) < per_gene_prob) sb.graph_op = pick(config.op_values, rng);
        if (coin(rng) < per_gene_prob) sb.fc_pre_use = pick(config.fc_pre_values, rng) != 0;
        if (coin(rng) < per_gene_prob) sb.ffn_use = pick(config.ffn_use_values, rng) != 0;
        if (coin(rng) < per_gene_prob) sb.ffn_width = pick(config.width_values, rng);
    }
}

std::pair<ArchitectureGenome, ArchitectureGenome> crossover_genomes(const ArchitectureGenome &a,
                                                                    const ArchitectureGenome &b, Rng &rng) {
    if (a.superblocks.size() != b.superblocks.size())
        throw ValidationError("crossover: parents have different superblock counts");
    ArchitectureGenome c1 = a, c2 = b;
    std::uniform_int_distribution<int> coin(0, 1);
    for (std::size_t i = 0; i < a.superblocks.size(); ++i) {
        if (coin(rng)) std::swap(c1.superblocks[i], c2.superblocks[i]);
    }
    return {c1, c2};
}

std::vector<ArchitectureGenome> enumerate_space(const SpaceConfig &config, std::size_t cap) {
    BigCount total = genome_space_cardinality(config);
    if (total > static_cast<BigCount>(cap))
        throw BudgetError("genome space has " + big_to_string(total) + " candidates, above the enumeration cap of " +
                          std::to_string(cap));
    std::vector<ArchitectureGenome> out;
    out.reserve(static_cast<std::size_t>(total));
    const int genes_per_block = 5;
    const int slots = config.superblock_count * genes_per_block;
    std::vector<std::size_t> radix(slots), idx(slots, 0);
    for (int i = 0; i < config.superblock_count; ++i) {
        radix[i * genes_per_block + 0] = config.depth_values.size();
        radix[i * genes_per_block + 1] = config.op_values.size();
        radix[i * genes_per_block + 2] = config.fc_pre_values.size();
        radix[i * genes_per_block + 3] = config.ffn_use_values.size();
        radix[i * genes_per_block + 4] = config.width_values.size();
    }
    for (;;) {
        ArchitectureGenome g;
        g.backbone = config.backbone;
        for (int i = 0; i < config.superblock_count; ++i) {
            SuperblockGenes sb;
            sb.depth = config.depth_values[idx[i * genes_per_block + 0]];
            sb.graph_op = config.op_values[idx[i * genes_per_block + 1]];
            sb.fc_pre_use = config.fc_pre_values[idx[i * genes_per_block + 2]] != 0;
            sb.ffn_use = config.ffn_use_values[idx[i * genes_per_block + 3]] != 0;
            sb.ffn_width = config.width_values[idx[i * genes_per_block + 4]];
            g.superblocks.push_back(sb);
        }
        out.push_back(std::move(g));
        int pos = slots - 1;
        while (pos >= 0) {
            if (++idx[pos] < radix[pos]) break;
            idx[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return out;
}

std::string genome_to_string(const ArchitectureGenome &genome) {
    std::ostringstream out;
    out << "ops=";
    for (std::size_t i = 0; i < genome.superblocks.size(); ++i) {
        if (i) out << '-';
        out << graph_op_letter(genome.superblocks[i].graph_op);
    }
    auto ints = [&](const char *key, auto get) {
        out << ';' << key << '=';
        for (std::size_t i = 0; i < genome.superblocks.size(); ++i) {
            if (i) out << ',';
            out << get(genome.superblocks[i]);
        }
    };
    ints("d", [](const SuperblockGenes &sb) { return sb.depth; });
    ints("ffn", [](const SuperblockGenes &sb) { return sb.ffn_use ? 1 : 0; });
    ints("pre", [](const SuperblockGenes &sb) { return sb.fc_pre_use ? 1 : 0; });
    ints("w", [](const SuperblockGenes &sb) { return sb.ffn_width; });
    return out.str();
}

namespace {

[[noreturn]] void genome_parse_error(std::size_t column, const std::string &msg) {
    throw ValidationError("genome string: column " + std::to_string(column + 1) + ": " + msg);
}

} // namespace

ArchitectureGenome parse_genome_string(const std::string &text, BackboneKind backbone) {
    // fields are ';'-separated "key=value"; keys: ops, d, ffn, pre, w
    std::vector<std::string> ops_letters;
    std::vector<int> depths, ffns, pres, widths;
    bool seen_ops = false;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(';', pos);
        if (end == std::string::npos) end = text.size();
        std::string field = text.substr(pos, end - pos);
        if (trim(field).empty()) {
            if (end == text.size()) break;
            genome_parse_error(pos, "empty field");
        }
        std::size_t eq = field.find('=');
        if (eq == std::string::npos) genome_parse_error(pos, "expected key=value in '" + field + "'");
        std::string key = to_lower(trim(field.substr(0, eq)));
        std::string value = trim(field.substr(eq + 1));
        std::size_t value_col = pos + eq + 1;
        if (value.empty()) genome_parse_error(value_col, "empty value for '" + key + "'");

        if (key == "ops") {
            seen_ops = true;
            for (const auto &tok : split_list(value, '-')) {
                if (tok.size() != 1) genome_parse_error(value_col, "op token '" + tok + "' must be a single letter");
                ops_letters.push_back(tok);
            }
            if (ops_letters.empty()) genome_parse_error(value_col, "no ops given");
        } else if (key == "d" || key == "ffn" || key == "pre" || key == "w") {
            std::vector<int> vals;
            for (const auto &tok : split_list(value, ',')) {
                try {
                    vals.push_back(static_cast<int>(parse_int(tok, key)));
                } catch (const ValidationError &) {
                    genome_parse_error(value_col, "bad integer '" + tok + "' for '" + key + "'");
                }
            }
            if (key == "d") depths = vals;
            else if (key == "ffn") ffns = vals;
            else if (key == "pre") pres = vals;
            else widths = vals;
        } else {
            genome_parse_error(pos, "unknown key '" + key + "' (expected ops|d|ffn|pre|w)");
        }
        if (end == text.size()) break;
        pos = end + 1;
    }

    if (!seen_ops) genome_parse_error(0, "missing 'ops' field");
    const std::size_t n = ops_letters.size();
    auto check_len = [&](const std::vector<int> &v, const char *key) {
        if (v.size() != n)
            genome_parse_error(0, std::string("field '") + key + "' has " + std::to_string(v.size()) +
                                      " entries, expected " + std::to_string(n));
    };
    if (depths.empty()) depths.assign(n, 4);
    if (ffns.empty()) ffns.assign(n, 1);
    if (pres.empty()) pres.assign(n, 1);
    if (widths.empty()) widths.assign(n, 192);
    check_len(depths, "d");
    check_len(ffns, "ffn");
    check_len(pres, "pre");
    check_len(widths, "w");

    ArchitectureGenome g;
    g.backbone = backbone;
    for (std::size_t i = 0; i < n; ++i) {
        SuperblockGenes sb;
        sb.graph_op = graph_op_from_letter(ops_letters[i][0]);
        sb.depth = depths[i];
        sb.ffn_use = ffns[i] != 0;
        sb.fc_pre_use = pres[i] != 0;
        sb.ffn_width = widths[i];
        if (sb.depth < 1) genome_parse_error(0, "depth must be >= 1");
        if (sb.ffn_width < 1) genome_parse_error(0, "width must be >= 1");
        g.superblocks.push_back(sb);
    }
    return g;
}

} // namespace archmap
