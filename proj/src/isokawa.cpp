#include <hypvor/isokawa.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace hypvor {

QuadratureResult isokawa_perimeter_detail(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("isokawa_perimeter: intensity must be positive");
  const double c = 1.0 / (4.0 * kPi * lambda);
  // With u = t^2 the square-root kink at u = 0 disappears:
  // int_0^50 e^-u sqrt(u + c u^2) du = int_0^sqrt(50) 2 t^2 e^-t^2 sqrt(1 + c t^2) dt.
  auto f = [c](double t) {
    double t2 = t * t;
    return 2.0 * t2 * std::exp(-t2) * std::sqrt(1.0 + c * t2);
  };
  QuadratureResult out;
  double err = 0.0;
  double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::sqrt(50.0), 15, 1e-14, &err);
  // Beyond 50: sqrt(u + c u^2) <= u sqrt(c + 1/50), and int_50^inf u e^-u du = 51 e^-50.
  double tail = 51.0 * std::exp(-50.0) * std::sqrt(c + 0.02);
  double scale = 8.0 / std::sqrt(kPi * lambda);
  out.value = scale * integral;
  out.error_estimate = scale * err;
  out.tail_bound = scale * tail;
  return out;
}

double isokawa_perimeter(double lambda) { return isokawa_perimeter_detail(lambda).value; }

RatioRow typical_cell_experiment(double lambda, std::size_t replicas, const Seed& seed, const ExperimentOptions& opt) {
  if (replicas < 1) throw std::invalid_argument("typical_cell_experiment: replicas must be positive");
  std::vector<double> area(replicas), perimeter(replicas);
  std::vector<char> ok(replicas, 0);
  parallel_for(replicas, resolve_workers(opt.workers), [&](std::size_t k) {
    try {
      TypicalCellResult r = typical_cell(lambda, seed.with_stream(k), opt.cell);
      area[k] = polygon_area(r.cell);
      perimeter[k] = polygon_perimeter(r.cell);
      ok[k] = 1;
    } catch (const WindowCap&) {
      ok[k] = 0;
    }
  });
  std::vector<double> a, p;
  std::size_t excluded = 0;
  for (std::size_t k = 0; k < replicas; ++k) {
    if (!ok[k]) {
      ++excluded;
      continue;
    }
    a.push_back(area[k]);
    p.push_back(perimeter[k]);
  }
  RatioRow row;
  row.lambda = lambda;
  row.mean_area = estimate(a, seed, excluded);
  row.mean_perimeter = estimate(p, seed, excluded);
  row.ratio = row.mean_area.mean > 0.0 ? row.mean_perimeter.mean / row.mean_area.mean : 0.0;
  row.reference_perimeter = isokawa_perimeter(lambda);
  return row;
}

std::vector<RatioRow> density_experiment(const std::vector<double>& lambdas, std::size_t replicas, const Seed& seed,
                                         const ExperimentOptions& opt) {
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] > 0.0)) throw std::invalid_argument("density_experiment: intensities must be positive");
    if (k > 0 && !(lambdas[k] < lambdas[k - 1]))
      throw std::invalid_argument("density_experiment: intensities must be descending");
  }
  std::vector<RatioRow> rows;
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    rows.push_back(typical_cell_experiment(lambdas[k], replicas, seed.derive(k), opt));
  return rows;
}

}  // namespace hypvor
