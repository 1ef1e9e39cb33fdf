#pragma once

#include <string>

#include "eamkit/contour.hpp"
#include "eamkit/eamfit.hpp"
#include "eamkit/entropy.hpp"
#include "eamkit/states.hpp"

namespace eamkit {

/// %.12g formatting; all file formats carry 12 significant digits.
std::string format_sig12(double x);

/// Round through the 12-significant-digit decimal representation.
double round_sig12(double x);

std::string timestamp_utc();

/// Write via a temp file and rename, so failures leave no partial output.
void atomic_write(const std::string& path, const std::string& content);

// Entropy table: CSV with `# key=value` header lines and
// mask_decimal,popcount,entropy_nats rows (all 2^N, masks ascending), or the
// JSON equivalent. Readers accept either; format is sniffed from content.
void write_entropy_table_csv(const EntropyTable& table, const std::string& path,
                             bool timestamp = true);
void write_entropy_table_json(const EntropyTable& table, const std::string& path);
EntropyTable read_entropy_table(const std::string& path);

// EAM: {"n_sites": N, "s0": number|null, "links": [[i, j, weight], ...]}
// with all M = N(N-1)/2 links, i < j in lexicographic order; plus a dense
// N x N CSV export.
void write_eam_json(const EntanglementAdjacency& eam, const std::string& path);
EntanglementAdjacency read_eam_json(const std::string& path);
void write_eam_csv(const EntanglementAdjacency& eam, const std::string& path,
                   bool timestamp = true);

void write_fit_report_json(const FitReport& report, const std::string& path);

/// site,value_nats rows with header comments naming route, mask, model.
void write_contour_csv(const ContourVector& contour, const std::string& route,
                       const std::string& model, int n_sites,
                       const std::string& path, bool timestamp = true);

void write_comparison_json(const ContourComparison& cmp, Mask mask,
                           const std::string& route_a, const std::string& route_b,
                           const std::string& path);

/// index,re,im amplitude dump.
void write_state_csv(const PureState& state, const std::string& model,
                     const std::string& path, bool timestamp = true);

}  // namespace eamkit
