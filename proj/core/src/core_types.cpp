#include "saleval/core_types.hpp"

#include <cmath>

namespace saleval {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::EmptyMap: return "EmptyMap";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyFixations: return "EmptyFixations";
    case ErrorCode::EmptyNegativePool: return "EmptyNegativePool";
    case ErrorCode::UnbalancedProblem: return "UnbalancedProblem";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::KernelShapeMismatch: return "KernelShapeMismatch";
    case ErrorCode::ChannelNotDivisible: return "ChannelNotDivisible";
    case ErrorCode::WeightShapeMismatch: return "WeightShapeMismatch";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::SplitMismatch: return "SplitMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::DuplicateImageId: return "DuplicateImageId";
    case ErrorCode::EmptyReport: return "EmptyReport";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::MismatchedImageSets: return "MismatchedImageSets";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

DensityMap::DensityMap(int w, int h) : width(w), height(h) {
  if (w < 1 || h < 1) raise(ErrorCode::EmptyMap, "map dimensions must be >= 1");
  values.assign(static_cast<std::size_t>(w) * h, 0.0);
}

DensityMap::DensityMap(int w, int h, std::vector<double> v)
    : width(w), height(h), values(std::move(v)) {
  if (w < 1 || h < 1) raise(ErrorCode::EmptyMap, "map dimensions must be >= 1");
  if (values.size() != static_cast<std::size_t>(w) * h)
    raise(ErrorCode::ShapeMismatch, "value count does not match width*height");
}

double DensityMap::total() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

ValidationResult validate_map(const DensityMap& map) {
  if (map.width < 1 || map.height < 1 || map.values.empty())
    return {false, ErrorCode::EmptyMap, "map has zero size"};
  if (map.values.size() != static_cast<std::size_t>(map.width) * map.height)
    return {false, ErrorCode::ShapeMismatch, "value count does not match dimensions"};
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    const double v = map.values[i];
    if (!std::isfinite(v))
      return {false, ErrorCode::NonFinite,
              "non-finite value at index " + std::to_string(i)};
    if (v < 0.0)
      return {false, ErrorCode::NegativeValue,
              "negative value at index " + std::to_string(i)};
  }
  if (map.normalized) {
    const double sum = map.total();
    if (sum < 1.0 - 1e-9 || sum > 1.0 + 1e-9)
      return {false, ErrorCode::ZeroMass, "map flagged normalized but sums to " + std::to_string(sum)};
  }
  return {};
}

DensityMap normalize_to_distribution(const DensityMap& map) {
  const double sum = map.total();
  if (!(sum > 0.0)) raise(ErrorCode::ZeroMass, "cannot normalize a zero-mass map");
  DensityMap out = map;
  for (double& v : out.values) v /= sum;
  out.normalized = true;
  return out;
}

}  // namespace saleval
