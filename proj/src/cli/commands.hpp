// Option structs and entry points for the spinosc_cli subcommands.
#pragma once

#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "spinosc/errors.hpp"

namespace spinosc::cli {

// Exit-code contract shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidity = 3;
inline constexpr int kExitNumerical = 4;
inline constexpr int kExitVerification = 5;

struct WitnessOptions {
  std::string config_path;
  std::string sweep;  // t | nbar | lambda | q_over_nbar
  double from{0.0};
  double to{1.0};
  int points{101};
  std::string out;  // empty: stdout
};
int run_witness(const WitnessOptions& opt);

struct CouplingOptions {
  std::string config_path;  // empty: preset chosen by mode
  std::string mode{"quad"};
  bool mode_given{false};
  bool scaling{false};
  std::string out;
};
int run_coupling(const CouplingOptions& opt);

struct VerifyOptions {
  std::string suite{"all"};
  std::uint64_t seed{1};
  int n_real{0};  // 0: per-suite default
  std::string out;
};
int run_verify(const VerifyOptions& opt);

struct PhaseOptions {
  std::string config_path;  // empty: working-pair defaults
  double theta_max{-1.0};   // negative: geometry value
  double periods{1.0};
  int steps{2000};
  std::string out;
};
int run_phase(const PhaseOptions& opt);

// Folds thrown library errors into the exit-code contract.
template <class F>
int guarded(F&& fn) {
  try {
    return fn();
  } catch (const ConfigParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const NonPositiveParameter& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const MissingQualityFactor& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const PerturbativityViolated& e) {
    std::fprintf(stderr, "validity error: %s\n", e.what());
    return kExitValidity;
  } catch (const UnsupportedTime& e) {
    std::fprintf(stderr, "validity error: %s\n", e.what());
    return kExitValidity;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
}

}  // namespace spinosc::cli
