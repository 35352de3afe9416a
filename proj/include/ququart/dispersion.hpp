#pragma once

#include <string>
#include <string_view>

namespace ququart {

struct Indices {
  double n_o;
  double n_e;
};

// Three-term Sellmeier pair for a uniaxial crystal:
//   n^2 = a + b L^2 / (L^2 - c) + d L^2 / (L^2 - e),  L in micrometres.
class DispersionModel {
 public:
  struct Sellmeier {
    double a, b, c, d, e;
  };

  DispersionModel(std::string name, Sellmeier ordinary, Sellmeier extraordinary,
                  double min_nm, double max_nm);

  const std::string& name() const { return name_; }
  double min_nm() const { return min_nm_; }
  double max_nm() const { return max_nm_; }

  /// Throws RangeError outside [min_nm, max_nm].
  Indices indices(double wavelength_nm) const;

 private:
  std::string name_;
  Sellmeier ordinary_;
  Sellmeier extraordinary_;
  double min_nm_;
  double max_nm_;
};

/// Crystalline (alpha) quartz, G. Ghosh, Opt. Commun. 163, 95 (1999).
const DispersionModel& quartz();

/// Looks a model up by name ("quartz"); throws DomainError for unknown names.
const DispersionModel& dispersion_model(std::string_view name);

}  // namespace ququart
