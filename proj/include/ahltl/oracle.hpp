#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ahltl/formula.hpp"
#include "ahltl/model.hpp"
#include "ahltl/synccheck.hpp"

namespace ahltl {

// Truth value of psi at every slot of a tuple word (slot i covers positions i, i+loop, ...).
// Variable j of `vars` reads component j of each letter; props index into `aps`.
std::vector<char> eval_slots(const Word& w, const Expr& psi, const std::vector<std::string>& vars,
                             const std::vector<std::string>& aps);
bool eval_word_at(const Word& w, const Expr& psi, const std::vector<std::string>& vars,
                  const std::vector<std::string>& aps, std::size_t position);

// The sequence of letter tuples seen by (Pi, t), (Pi, t)+1, ...; nullopt past the period cap.
std::optional<Word> composite_word(const std::vector<LetterLasso>& traces, const Trajectory& t,
                                   std::size_t cap = 10000);

std::optional<bool> eval_letters(const std::vector<LetterLasso>& traces, const Trajectory& t, const Expr& psi,
                                 const std::vector<std::string>& vars, const std::vector<std::string>& aps,
                                 std::size_t cap = 10000);
std::optional<bool> eval_body(const KripkeStructure& k, const std::vector<Lasso>& traces, const Trajectory& t,
                              const Expr& psi, const std::vector<std::string>& vars, std::size_t cap = 10000);

// All fair trajectories over n variables with |stem| + |loop| <= bound.
std::vector<Trajectory> enumerate_trajectories(int num_vars, int bound);

// True when K has finitely many traces and all of them are lassos of size <= bound.
bool traces_complete(const KripkeStructure& k, int bound);

enum class Outcome { Holds, Fails, Inconclusive };
const char* to_string(Outcome o);

struct OracleOptions {
    // Decide E/A exactly on the asynchronous product when bounded trajectories are not enough.
    bool exact_trajectories = true;
    // Restrict trajectories to the lockstep one (synchronous reading of the body).
    bool lockstep_only = false;
    std::size_t period_cap = 10000;
    std::size_t product_cap = 2000000;
};

struct BoundedVerdict {
    Outcome outcome = Outcome::Inconclusive;
    int trace_bound = 0;
    int traj_bound = 0;
    bool traces_complete = false;
    // Witness for a HOLDS with an outer exists, counterexample for a FAILS with an outer forall.
    std::vector<std::string> witness_vars;
    std::vector<Lasso> witness;
    std::optional<Trajectory> trajectory;
    std::size_t assignments = 0;
    std::string note;
};

BoundedVerdict oracle_check(const KripkeStructure& k, const Formula& phi, int trace_bound, int traj_bound,
                            const OracleOptions& options = {});

// Exact E check for one fully assigned tuple; returns a satisfying fair trajectory if one exists.
std::optional<Trajectory> find_trajectory(const KripkeStructure& k, const std::vector<Lasso>& traces, const Expr& psi,
                                          const std::vector<std::string>& vars, bool lockstep_only = false);

}  // namespace ahltl
