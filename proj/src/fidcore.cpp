#include "fid/fidcore.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace fid {
namespace {

std::atomic<int> g_max_threads{1};

constexpr std::size_t kChunk = 1024;

double max_rel_residual(const Vec& got, const Vec& want) {
  double r = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    const double scale = std::max(1.0, std::fabs(want[i]));
    r = std::max(r, std::fabs(got[i] - want[i]) / scale);
  }
  return r;
}

}  // namespace

FiducialDraws make_equal_weight_draws(std::vector<Vec> draws) {
  FiducialDraws d;
  const std::size_t m = draws.size();
  d.draws = std::move(draws);
  d.weights.assign(m, m > 0 ? 1.0 / static_cast<double>(m) : 0.0);
  return d;
}

void set_max_threads(int threads) {
  g_max_threads.store(std::max(1, threads));
}

int max_threads() { return g_max_threads.load(); }

void run_chunked(std::size_t total, std::size_t chunk_size,
                 const std::function<void(std::size_t, std::size_t,
                                          std::size_t)>& body) {
  if (total == 0) return;
  const std::size_t nchunks = (total + chunk_size - 1) / chunk_size;
  const int workers =
      static_cast<int>(std::min<std::size_t>(nchunks, max_threads()));
  if (workers <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) {
      const std::size_t first = c * chunk_size;
      body(c, first, std::min(chunk_size, total - first));
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= nchunks || failed.load()) return;
        const std::size_t first = c * chunk_size;
        try {
          body(c, first, std::min(chunk_size, total - first));
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failed.load()) std::rethrow_exception(error);
}

std::vector<Vec> forward_simulate(const FiducialModel& model, const Vec& theta,
                                  RandomStream stream, std::size_t m) {
  if (m == 0) throw std::invalid_argument("forward_simulate: m must be >= 1");
  std::vector<Vec> out(m);
  run_chunked(m, kChunk, [&](std::size_t chunk, std::size_t first,
                             std::size_t count) {
    RandomStream s = stream.substream(chunk);
    for (std::size_t i = 0; i < count; ++i)
      out[first + i] = model.relation(model.draw_u(s), theta);
  });
  return out;
}

FiducialDraws fiducial_sample_simple(const FiducialModel& model, const Vec& z,
                                     RandomStream stream, std::size_t m) {
  const auto* solver = std::get_if<SimpleSolver>(&model.inversion);
  if (solver == nullptr)
    throw std::invalid_argument(
        "fiducial_sample_simple: model has no SimpleSolver inversion");
  std::vector<Vec> draws(m);
  run_chunked(m, kChunk, [&](std::size_t chunk, std::size_t first,
                             std::size_t count) {
    RandomStream s = stream.substream(chunk);
    for (std::size_t i = 0; i < count; ++i) {
      const Vec u = model.draw_u(s);
      Vec theta = solver->solve(z, u);
      if (max_rel_residual(model.relation(u, theta), z) > kFidResidualTol)
        throw std::runtime_error("fiducial_sample_simple: residual exceeds "
                                 "tolerance for model " + model.id);
      draws[first + i] = std::move(theta);
    }
  });
  FiducialDraws d = make_equal_weight_draws(std::move(draws));
  d.model_id = model.id;
  d.data = z;
  d.seed = stream.seed;
  d.stream_id = stream.stream_id;
  return d;
}

FiducialDraws fiducial_sample_group(const FiducialModel& model, const Vec& z,
                                    RandomStream stream, std::size_t m) {
  const auto* gc = std::get_if<GroupConditional>(&model.inversion);
  if (gc == nullptr)
    throw std::invalid_argument(
        "fiducial_sample_group: model has no GroupConditional inversion");
  const Vec y = gc->maximal_invariant(z);
  std::vector<Vec> draws(m);
  run_chunked(m, kChunk, [&](std::size_t chunk, std::size_t first,
                             std::size_t count) {
    RandomStream s = stream.substream(chunk);
    for (std::size_t i = 0; i < count; ++i) {
      const Vec u = gc->conditional_u(y, s);
      Vec theta = gc->selection(z, u);
      if (max_rel_residual(model.relation(u, theta), z) > kFidResidualTol)
        throw std::runtime_error("fiducial_sample_group: selection residual "
                                 "exceeds tolerance for model " + model.id);
      draws[first + i] = std::move(theta);
    }
  });
  FiducialDraws d = make_equal_weight_draws(std::move(draws));
  d.model_id = model.id;
  d.data = z;
  d.seed = stream.seed;
  d.stream_id = stream.stream_id;
  return d;
}

FiducialDraws fiducial_sample(const FiducialModel& model, const Vec& z,
                              RandomStream stream, std::size_t m) {
  if (std::holds_alternative<SimpleSolver>(model.inversion))
    return fiducial_sample_simple(model, z, stream, m);
  return fiducial_sample_group(model, z, stream, m);
}

double fiducial_quantile(const FiducialDraws& d, int coordinate, double p) {
  if (d.draws.empty()) throw std::invalid_argument("fiducial_quantile: empty");
  if (!(p > 0) || !(p < 1))
    throw std::invalid_argument("fiducial_quantile: p must be in (0,1)");
  std::vector<std::size_t> idx(d.draws.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return d.draws[a][static_cast<std::size_t>(coordinate)] <
           d.draws[b][static_cast<std::size_t>(coordinate)];
  });
  double cum = 0.0;
  for (std::size_t k : idx) {
    cum += d.weights[k];
    if (cum >= p - 1e-15)
      return d.draws[k][static_cast<std::size_t>(coordinate)];
  }
  return d.draws[idx.back()][static_cast<std::size_t>(coordinate)];
}

double fiducial_cdf_at(const FiducialDraws& d, int coordinate, double t) {
  if (d.draws.empty()) throw std::invalid_argument("fiducial_cdf_at: empty");
  double cum = 0.0;
  for (std::size_t k = 0; k < d.draws.size(); ++k)
    if (d.draws[k][static_cast<std::size_t>(coordinate)] <= t)
      cum += d.weights[k];
  return cum;
}

}  // namespace fid
