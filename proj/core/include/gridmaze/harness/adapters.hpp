#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "gridmaze/harness/provider.hpp"

namespace gridmaze::harness {

// Sends one request and returns the provider's answer. Implementations must
// be safe to call from several threads at once.
class Adapter {
 public:
  virtual ~Adapter() = default;
  // Throws TransportError or AuthError.
  virtual AdapterReply send(const ProviderRequest& request, const ManifestEntry& entry) = 0;
};

struct TransportOptions {
  // Retries for HTTP 429/5xx and connection failures; separate from the
  // JSON-parse retry budget.
  int max_transport_retries = 4;
  double backoff_base_s = 1.0;
  double backoff_cap_s = 60.0;
  std::uint64_t jitter_seed = 0x6d617a65;
  // Injected for tests; defaults to std::this_thread::sleep_for.
  std::function<void(double)> sleep;
};

// Full-jitter exponential backoff: uniform in [0, min(cap, base * 2^attempt)).
double backoff_delay(const TransportOptions& options, int attempt, double unit_draw);

// Token bucket with capacity 1 and the given refill rate. acquire() blocks.
class TokenBucket {
 public:
  explicit TokenBucket(double requests_per_minute);
  void acquire();

 private:
  using Clock = std::chrono::steady_clock;
  std::mutex mutex_;
  double interval_s_;
  Clock::time_point next_;
};

// HTTP transport for the four remote adapter kinds. The API key is read from
// the configured environment variable at construction (AuthError if unset).
class RemoteAdapter final : public Adapter {
 public:
  RemoteAdapter(ProviderConfig config, TransportOptions options = {});
  AdapterReply send(const ProviderRequest& request, const ManifestEntry& entry) override;

 private:
  ProviderConfig config_;
  TransportOptions options_;
  std::string api_key_;
  std::string origin_;
  std::string path_prefix_;
  std::mutex rng_mutex_;
  std::uint64_t jitter_state_;
};

// Offline reference solvers selected by model_id:
//   oracle       answers from the manifest annotation
//   readback     recovers the grid from the request itself (decoded image or
//                embedded text grid) and solves it
//   naive        always claims reachable with the unchecked L-shaped path
//   random-walk  seeded random walk of bounded length
class LocalAdapter final : public Adapter {
 public:
  explicit LocalAdapter(ProviderConfig config);
  AdapterReply send(const ProviderRequest& request, const ManifestEntry& entry) override;

 private:
  ProviderConfig config_;
};

std::unique_ptr<Adapter> make_adapter(const ProviderConfig& config, const TransportOptions& options = {});

}  // namespace gridmaze::harness
