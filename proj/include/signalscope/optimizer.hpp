#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "signalscope/hilbert.hpp"
#include "signalscope/machines.hpp"

namespace signalscope {

struct SearchConfig {
    int restarts = 32;
    int max_iterations = 10000;
    double tolerance = 1e-10;
    std::uint64_t seed = 0;
};

// Raised when no restart converges; carries the best objective value seen.
class SearchFailure : public std::runtime_error {
public:
    SearchFailure(const std::string& what, double best)
        : std::runtime_error(what), best_found(best) {}

    double best_found;
};

struct GramSearchResult {
    double fidelity;
    StatePair outputs;
};

struct UnitarySearchResult {
    double fidelity;
    Matrix unitary;           // attaining certificate
    int converged_restarts;
};

// Maximizes (Re<t1|o1> + Re<t2|o2>)/2 over ALL unit pairs in the full space
// with inner(o1, o2) pinned to forced_overlap; the pin is exact by
// construction, so the search itself is unconstrained.
GramSearchResult gram_constrained_max(const StatePair& targets,
                                      double forced_overlap,
                                      const SearchConfig& config = {});

// Same objective maximized over unitaries U = exp(iH), H Hermitian with
// dim^2 real parameters, via gradient ascent from seeded random starts.
UnitarySearchResult unitary_search_detailed(const StatePair& inputs,
                                            const StatePair& targets,
                                            Eigen::Index dim,
                                            const SearchConfig& config);

double unitary_search(const StatePair& inputs, const StatePair& targets,
                      Eigen::Index dim, const SearchConfig& config);

namespace detail {

// Objective f(H) = Re tr(exp(iH) A) with A = (i1 t1^dag + i2 t2^dag)/2,
// exposed so the analytic gradient can be checked against finite differences.
class UnitaryObjective {
public:
    UnitaryObjective(Matrix coupling);

    Eigen::Index param_count() const { return dim_ * dim_; }
    Matrix hermitian_from(const Eigen::VectorXd& params) const;
    Matrix unitary_from(const Eigen::VectorXd& params) const;
    double value(const Eigen::VectorXd& params) const;
    double value_and_gradient(const Eigen::VectorXd& params,
                              Eigen::VectorXd& gradient) const;

private:
    Matrix coupling_;
    Eigen::Index dim_;
};

}  // namespace detail

}  // namespace signalscope
