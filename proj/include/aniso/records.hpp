#pragma once

#include <string>

#include <json.hpp>

#include "aniso/bounds.hpp"
#include "aniso/contours.hpp"
#include "aniso/exact_connectivity.hpp"
#include "aniso/mc_engine.hpp"

namespace aniso {

inline constexpr const char* kToolVersion = "aniso-perc 0.3.0";

using Json = nlohmann::ordered_json;

Json to_json(const Vertex& v);
Json to_json(const LatticeRegion& r);
Json to_json(const ExactResult& r);
Json to_json(const Estimate& e);
Json to_json(const PairedEstimate& e);
Json to_json(const BoundReport& r);
Json to_json(const ThresholdReport& r);
Json to_json(const ContourCensus& c);
Json to_json(const LemmaReport& r);
Json to_json(const AlphaReport& r);

/// Doubles are written with 17 significant digits so values round-trip.
std::string format_double(double v);

std::string exact_csv_header();
std::string exact_csv_row(const ExactResult& r);
std::string estimate_csv_header();
std::string estimate_csv_row(const Estimate& e);
std::string bounds_csv_header();
std::string bounds_csv_row(const BoundReport& r);
std::string threshold_csv_header();
std::string threshold_csv_rows(const ThresholdReport& r);

}  // namespace aniso
