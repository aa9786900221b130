#pragma once

#include <string>
#include <vector>

#include "archmap/analysis.hpp"
#include "archmap/ooe.hpp"

namespace archmap {

// Stable run identifier: (config content hash, seed) fully determines every
// record file, so they all carry this id in their first comment line.
std::string run_id(std::uint64_t config_hash, std::uint64_t seed);

std::string co_search_records(const CoSearchResult &result, const Platform &platform, const SpaceConfig &space,
                              const std::string &run);

// Per-generation archive hypervolume; the reference point (acc=0, 1.1x worst
// observed latency/energy) is echoed in the header comments.
std::string hv_trace_records(const CoSearchResult &result, const std::string &run);

std::string composition_records(const CoSearchResult &result, const Platform &platform, const std::string &run);

std::string ioe_records(const IoeResult &result, const WorkloadPlan &plan, const Platform &platform,
                        double gamma1, double gamma2, const std::string &run);

std::string oracle_records(const OracleResult &result, const WorkloadPlan &plan, const Platform &platform,
                           const StandaloneRefs &refs, double gamma1, double gamma2, const std::string &run);

// Fixed-width rendering of a delimited records file for terminal reports.
std::string render_table(const std::string &records, std::size_t max_col_width = 28);

} // namespace archmap
