#pragma once

#include "dppost/types.hpp"

#include <istream>
#include <string>
#include <vector>

namespace dppost {

inline constexpr const char* kTruthColumns[] = {"Y18minus", "Y18plus", "YFHH"};
inline constexpr const char* kNoisyColumns[] = {"Z18minus", "Z18plus", "ZFHH"};
inline constexpr const char* kRatioColumns[] = {"under18", "over18", "total"};

// Columns are located by header name; extra columns are ignored.
// An empty input (or a header alone) yields zero rows.
std::vector<Tabulation> read_truth_csv(std::istream& in, const std::string& source = "<stream>");
std::vector<Tabulation> read_truth_csv(const std::string& path);

// Reads only stratum and the Z columns, never any truth column that may be present.
std::vector<NoisyMeasurement> read_noisy_csv(std::istream& in, const MechanismSpec& mechanism,
                                             const std::string& source = "<stream>");
std::vector<NoisyMeasurement> read_noisy_csv(const std::string& path, const MechanismSpec& mechanism);

struct PublishedRatios {
    Stratum stratum;
    RatioTriple ratios;
};

// A published ratio table: stratum,under18,over18,total.
std::vector<PublishedRatios> read_ratio_csv(std::istream& in, const std::string& source = "<stream>");
std::vector<PublishedRatios> read_ratio_csv(const std::string& path);

void write_truth_csv(std::ostream& out, const std::vector<Tabulation>& rows);
void write_noisy_csv(std::ostream& out, const std::vector<NoisyMeasurement>& rows);

// Writes text to path, throwing std::runtime_error when the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dppost
