#pragma once

// Randomized self-verification: generates small seeded instances and
// cross-checks every mechanism against the independent oracles and the
// full property battery — mechanism invariants, reassignment laws at
// interior states, volume bounds, per-order volume uniqueness, audit
// round-trips, and single-unit perturbation detection. On failure the
// offending instance is greedily shrunk before being reported.

#include <iosfwd>
#include <random>

#include "uncross/oracle.hpp"

namespace uncross {

struct Instance {
    OrderBookSide bids{Side::Bid, {}};
    OrderBookSide asks{Side::Ask, {}};
};

void print_instance(std::ostream& out, const Instance& instance);

// Deterministic integer in [lo, hi]: rejection sampling over the raw
// 64-bit stream, so sequences are identical across standard libraries
// (std::uniform_int_distribution is not portable).
std::int64_t bounded(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

// Books drawn inside the budget, with deliberately tiny price and
// timestamp ranges so ties and crossings are frequent. Ids are unique
// across both sides.
Instance random_instance(const InstanceBudget& budget, std::mt19937_64& rng);

struct CheckOptions {
    InstanceBudget budget{};
    // Enumeration-backed checks (oracle agreement, uniqueness sweeps);
    // everything else stays on for any instance size.
    bool exhaustive = true;
    // Cap on matchings sampled for the reassignment battery.
    std::size_t matching_samples = 64;
    // Single-unit perturbations of the reference output through audit.
    bool perturbations = true;
};

// Check groups, each returning the first failure description or nullopt.
// All of them validate the books first.

// Mechanism outputs against the independent oracles: uniform-price
// properties and optimal volume, maximum-volume properties and the
// exhaustive/max-flow volumes, and the demand+supply bound sweep.
std::optional<std::string> check_mechanisms(const Instance& instance,
                                            const CheckOptions& options);

// Reassignment laws over sampled matchings: full fairness composition,
// single-side reassignments, and the interior-state invariants reached
// partway through a reassignment.
std::optional<std::string> check_fairness_battery(const Instance& instance,
                                                  const CheckOptions& options);

// Per-order volume agreement across equal-volume fair matchings and
// across the whole best-volume single-price fair set.
std::optional<std::string> check_uniqueness_battery(const Instance& instance,
                                                    const CheckOptions& options);

// Audit round-trip: the reference output audits clean, and every
// single-unit perturbation of it is flagged.
std::optional<std::string> check_audit_battery(const Instance& instance,
                                               const CheckOptions& options);

// Runs every group above on one instance; returns the first failure
// description, or nullopt when all pass.
std::optional<std::string> check_instance(const Instance& instance,
                                          const CheckOptions& options);

// One-step reductions of an instance (drop an order, lower a quantity,
// price, or timestamp), each a candidate for shrinking.
std::vector<Instance> shrink_candidates(const Instance& instance);

// Repeatedly applies the first failing reduction until none fails.
Instance shrink(Instance failing, const CheckOptions& options);

struct SuiteResult {
    std::uint64_t instances_checked = 0;
    bool passed = true;
    std::string failure;     // meaningful when !passed (after shrinking)
    Instance counterexample; // minimized, meaningful when !passed
};

// Checks `count` seeded instances; stops at (and shrinks) the first
// failure. Progress lines go to `progress` when non-null.
SuiteResult run_suite(std::uint64_t seed, std::uint64_t count,
                      const CheckOptions& options,
                      std::ostream* progress = nullptr);

}  // namespace uncross
