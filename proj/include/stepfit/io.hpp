#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stepfit/kstep.hpp"
#include "stepfit/types.hpp"

namespace stepfit {

struct Instance {
    std::vector<WeightedPoint> points;
    std::size_t k = 1;
    CostModel model = CostModel::Linear;
};

// Fit result in serialization-ready form.
struct FitOutput {
    double cost = 0.0;
    std::vector<Segment> segments;
    std::vector<std::size_t> boundaries;  // points left of each internal break
    std::string engine;                   // "prune" or "oracle"
    FitDiagnostics diagnostics;
};

// Parsers throw std::runtime_error naming the offending line or key.
// CSV: one "x,y,w" line per point (w optional, default 1), optional header.
Instance parse_csv(const std::string& text, const std::string& name = "csv");
// JSON: {"points":[{"x":..,"y":..,"w":..}...], "k":.., "model":"linear"|"squared"}.
Instance parse_json(const std::string& text, const std::string& name = "json");

// Dispatches on `format` ("csv", "json", or "auto" by file extension).
Instance load_instance(const std::string& path, const std::string& format = "auto");

std::string instance_to_json(const Instance& inst);
std::string instance_to_csv(const Instance& inst);

// Builds the serializable view of a fit (boundaries derived from the fit's
// segment ends against the x-sorted points).
FitOutput make_fit_output(const Instance& inst, const FitReport& report,
                          const std::string& engine);

std::string fit_to_json(const FitOutput& out);
std::string fit_to_tsv(const FitOutput& out);

// Standalone vector drawing: points as weight-scaled circles, steps as
// horizontal segments, critical points highlighted. Byte-deterministic.
std::string render_svg(const FitOutput& out, const Instance& inst);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace stepfit
