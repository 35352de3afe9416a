#include "ququart/dispersion.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "ququart/errors.hpp"

namespace ququart {

namespace {

double sellmeier_index(const DispersionModel::Sellmeier& s, double lambda_um) {
  const double l2 = lambda_um * lambda_um;
  return std::sqrt(s.a + s.b * l2 / (l2 - s.c) + s.d * l2 / (l2 - s.e));
}

}  // namespace

DispersionModel::DispersionModel(std::string name, Sellmeier ordinary, Sellmeier extraordinary,
                                 double min_nm, double max_nm)
    : name_(std::move(name)),
      ordinary_(ordinary),
      extraordinary_(extraordinary),
      min_nm_(min_nm),
      max_nm_(max_nm) {}

Indices DispersionModel::indices(double wavelength_nm) const {
  if (!(wavelength_nm >= min_nm_ && wavelength_nm <= max_nm_)) {
    std::ostringstream msg;
    msg << "wavelength " << wavelength_nm << " nm outside the " << name_ << " model range ["
        << min_nm_ << ", " << max_nm_ << "] nm";
    throw RangeError(msg.str());
  }
  const double um = wavelength_nm * 1e-3;
  return {sellmeier_index(ordinary_, um), sellmeier_index(extraordinary_, um)};
}

const DispersionModel& quartz() {
  static const DispersionModel model(
      "quartz", {1.28604141, 1.07044083, 1.00585997e-2, 1.10202242, 100.0},
      {1.28851804, 1.09509924, 1.02101864e-2, 1.15662475, 100.0}, 198.0, 2050.0);
  return model;
}

const DispersionModel& dispersion_model(std::string_view name) {
  if (name == "quartz") return quartz();
  throw DomainError("unknown dispersion model '" + std::string(name) + "'");
}

}  // namespace ququart
