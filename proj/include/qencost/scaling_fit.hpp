#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "qencost/errors.hpp"

namespace qencost {

enum class FitModel { Linear, LinearLog, Power };

inline const char* fit_model_name(FitModel model) {
  switch (model) {
    case FitModel::Linear: return "linear";
    case FitModel::LinearLog: return "nlogn";
    case FitModel::Power: return "power";
  }
  return "?";
}

inline const char* fit_model_formula(FitModel model) {
  switch (model) {
    case FitModel::Linear: return "a*x";
    case FitModel::LinearLog: return "a*x*ln(x)";
    case FitModel::Power: return "a*x^b";
  }
  return "?";
}

struct FitResult {
  FitModel model = FitModel::Linear;
  double a = 0.0;
  std::optional<double> b;  // power model only
  double residual_norm = 0.0;
};

// Closed-form least squares. The one-parameter models are linear in a, so
// a = sum(x_i y_i) / sum(x_i^2) with the model basis as x; the power model
// is fit by ordinary least squares on (ln x, ln y).
inline FitResult fit_scaling(const std::vector<std::pair<double, double>>& data, FitModel model) {
  if (data.size() < 2) throw DegenerateData("need at least two data points");
  for (const auto& [x, y] : data) {
    if (!(x >= 2.0)) throw DegenerateData("abscissas must be at least 2");
    if (!std::isfinite(y)) throw DegenerateData("ordinates must be finite");
  }

  FitResult result;
  result.model = model;
  if (model == FitModel::Power) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : data) {
      if (!(y > 0.0)) throw DegenerateData("power fit needs positive ordinates");
      const double lx = std::log(x);
      const double ly = std::log(y);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double count = static_cast<double>(data.size());
    const double denom = count * sxx - sx * sx;
    if (denom == 0.0) throw DegenerateData("abscissas are all equal");
    const double b = (count * sxy - sx * sy) / denom;
    result.a = std::exp((sy - b * sx) / count);
    result.b = b;
  } else {
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [x, y] : data) {
      const double basis = model == FitModel::Linear ? x : x * std::log(x);
      sxy += basis * y;
      sxx += basis * basis;
    }
    result.a = sxy / sxx;
  }

  double squares = 0.0;
  for (const auto& [x, y] : data) {
    double predicted = 0.0;
    switch (model) {
      case FitModel::Linear: predicted = result.a * x; break;
      case FitModel::LinearLog: predicted = result.a * x * std::log(x); break;
      case FitModel::Power: predicted = result.a * std::pow(x, *result.b); break;
    }
    const double r = y - predicted;
    squares += r * r;
  }
  result.residual_norm = std::sqrt(squares);
  return result;
}

}  // namespace qencost
