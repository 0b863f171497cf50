#include "ptseq/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace ptseq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRowFloor = 1e-6;

double log_or_ninf(double x) { return x > 0.0 ? std::log(x) : -kInf; }

// Deterministic uniform in [0,1) from the raw engine output; the standard
// distributions are implementation-defined, this is not.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void check_symbols(const HmmModel& model, const SymbolSequence& obs) {
  if (obs.empty()) throw std::invalid_argument("observation sequence is empty");
  for (int s : obs) {
    if (s < 0 || static_cast<std::size_t>(s) >= model.num_symbols) {
      throw std::invalid_argument("observation symbol out of range");
    }
  }
}

void check_row(const double* row, std::size_t n, const char* what) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(row[i] >= 0.0 && row[i] <= 1.0)) {
      throw std::invalid_argument(std::string(what) + " entry outside [0,1]");
    }
    sum += row[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(what) + " row does not sum to 1");
  }
}

bool transition_allowed(Topology topology, std::size_t n, std::size_t i,
                        std::size_t j) {
  if (topology == Topology::Ergodic) return true;
  return j == i || (j == i + 1 && j < n);
}

// Floor the allowed entries (mask = positive entries of the reference row)
// and renormalize to a stochastic row.
void floor_and_normalize(double* row, const double* reference, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    row[i] = reference[i] > 0.0 ? std::max(row[i], kRowFloor) : 0.0;
    sum += row[i];
  }
  for (std::size_t i = 0; i < n; ++i) row[i] /= sum;
}

}  // namespace

void hmm_validate(const HmmModel& model) {
  const std::size_t n = model.num_states;
  const std::size_t m = model.num_symbols;
  if (n < 1 || m < 1) throw std::invalid_argument("model needs N >= 1 and M >= 1");
  if (model.transition.rows != n || model.transition.cols != n ||
      model.emission.rows != n || model.emission.cols != m ||
      model.initial.size() != n) {
    throw std::invalid_argument("model matrix dimensions are inconsistent");
  }
  for (std::size_t i = 0; i < n; ++i) {
    check_row(model.transition.row(i), n, "transition");
    check_row(model.emission.row(i), m, "emission");
  }
  check_row(model.initial.data(), n, "initial");
}

HmmModel uniform_hmm(std::size_t num_states, std::size_t num_symbols,
                     Topology topology) {
  if (num_states < 1 || num_symbols < 1) {
    throw std::invalid_argument("model needs N >= 1 and M >= 1");
  }
  HmmModel m;
  m.num_states = num_states;
  m.num_symbols = num_symbols;
  m.transition = Matrix(num_states, num_states);
  m.emission = Matrix(num_states, num_symbols);
  m.initial.assign(num_states, 0.0);
  for (std::size_t i = 0; i < num_states; ++i) {
    std::size_t allowed = 0;
    for (std::size_t j = 0; j < num_states; ++j) {
      if (transition_allowed(topology, num_states, i, j)) ++allowed;
    }
    for (std::size_t j = 0; j < num_states; ++j) {
      m.transition(i, j) = transition_allowed(topology, num_states, i, j)
                               ? 1.0 / static_cast<double>(allowed)
                               : 0.0;
    }
    for (std::size_t k = 0; k < num_symbols; ++k) {
      m.emission(i, k) = 1.0 / static_cast<double>(num_symbols);
    }
  }
  if (topology == Topology::LeftRight) {
    m.initial[0] = 1.0;
  } else {
    std::fill(m.initial.begin(), m.initial.end(),
              1.0 / static_cast<double>(num_states));
  }
  return m;
}

HmmModel random_hmm(std::size_t num_states, std::size_t num_symbols,
                    std::uint64_t seed, Topology topology) {
  HmmModel m = uniform_hmm(num_states, num_symbols, topology);
  std::mt19937_64 rng(seed);
  auto randomize_row = [&](double* row, std::size_t n) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (row[j] > 0.0) {
        row[j] = 0.1 + 0.9 * unit_draw(rng);
        sum += row[j];
      }
    }
    for (std::size_t j = 0; j < n; ++j) row[j] /= sum;
  };
  for (std::size_t i = 0; i < num_states; ++i) {
    randomize_row(m.transition.row(i), num_states);
    randomize_row(m.emission.row(i), num_symbols);
  }
  if (topology == Topology::Ergodic) randomize_row(m.initial.data(), num_states);
  return m;
}

HmmEvaluation hmm_evaluate(const HmmModel& model, const SymbolSequence& obs) {
  check_symbols(model, obs);
  const std::size_t n = model.num_states;
  const std::size_t t_len = obs.size();

  HmmEvaluation ev;
  ev.forward = Matrix(t_len, n);
  ev.backward = Matrix(t_len, n);
  ev.scale.assign(t_len, 0.0);

  double ll = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ev.forward(0, i) = model.initial[i] * model.emission(i, static_cast<std::size_t>(obs[0]));
  }
  for (std::size_t t = 0; t < t_len; ++t) {
    if (t > 0) {
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          acc += ev.forward(t - 1, i) * model.transition(i, j);
        }
        ev.forward(t, j) = acc * model.emission(j, static_cast<std::size_t>(obs[t]));
      }
    }
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += ev.forward(t, i);
    ev.scale[t] = c;
    const double inv = c > 0.0 ? 1.0 / c : 0.0;
    for (std::size_t i = 0; i < n; ++i) ev.forward(t, i) *= inv;
    ll += log_or_ninf(c);
  }
  ev.log_likelihood = ll;

  for (std::size_t i = 0; i < n; ++i) ev.backward(t_len - 1, i) = 1.0;
  for (std::size_t t = t_len - 1; t > 0; --t) {
    const std::size_t sym = static_cast<std::size_t>(obs[t]);
    const double inv = ev.scale[t] > 0.0 ? 1.0 / ev.scale[t] : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        acc += model.transition(i, j) * model.emission(j, sym) * ev.backward(t, j);
      }
      ev.backward(t - 1, i) = acc * inv;
    }
  }

  double head = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    head += model.initial[i] * model.emission(i, static_cast<std::size_t>(obs[0])) *
            ev.backward(0, i);
  }
  double ll_b = log_or_ninf(head);
  for (std::size_t t = 1; t < t_len; ++t) ll_b += log_or_ninf(ev.scale[t]);
  ev.log_likelihood_backward = ll_b;
  return ev;
}

double hmm_forward_log_likelihood(const HmmModel& model, const SymbolSequence& obs) {
  check_symbols(model, obs);
  const std::size_t n = model.num_states;
  std::vector<double> cur(n), next(n);
  for (std::size_t i = 0; i < n; ++i) {
    cur[i] = model.initial[i] * model.emission(i, static_cast<std::size_t>(obs[0]));
  }
  double ll = 0.0;
  for (std::size_t t = 0;; ++t) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += cur[i];
    ll += log_or_ninf(c);
    const double inv = c > 0.0 ? 1.0 / c : 0.0;
    for (std::size_t i = 0; i < n; ++i) cur[i] *= inv;
    if (t + 1 == obs.size()) break;
    const std::size_t sym = static_cast<std::size_t>(obs[t + 1]);
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += cur[i] * model.transition(i, j);
      next[j] = acc * model.emission(j, sym);
    }
    cur.swap(next);
  }
  return ll;
}

ViterbiResult hmm_viterbi(const HmmModel& model, const SymbolSequence& obs) {
  check_symbols(model, obs);
  const std::size_t n = model.num_states;
  const std::size_t t_len = obs.size();

  Matrix log_a(n, n);
  Matrix log_b(n, model.num_symbols);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) log_a(i, j) = log_or_ninf(model.transition(i, j));
    for (std::size_t k = 0; k < model.num_symbols; ++k) {
      log_b(i, k) = log_or_ninf(model.emission(i, k));
    }
  }

  // Best achievable score from (t, i) to the end; filling it backwards lets
  // the forward path walk pick the smallest state at every tie.
  Matrix suffix(t_len, n);
  for (std::size_t i = 0; i < n; ++i) suffix(t_len - 1, i) = 0.0;
  for (std::size_t t = t_len - 1; t > 0; --t) {
    const std::size_t sym = static_cast<std::size_t>(obs[t]);
    for (std::size_t i = 0; i < n; ++i) {
      double best = -kInf;
      for (std::size_t j = 0; j < n; ++j) {
        best = std::max(best, log_a(i, j) + log_b(j, sym) + suffix(t, j));
      }
      suffix(t - 1, i) = best;
    }
  }

  ViterbiResult result;
  result.path.resize(t_len);
  const std::size_t first_sym = static_cast<std::size_t>(obs[0]);
  double best = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    best = std::max(best,
                    log_or_ninf(model.initial[i]) + log_b(i, first_sym) + suffix(0, i));
  }
  result.log_probability = best;
  std::size_t state = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (log_or_ninf(model.initial[i]) + log_b(i, first_sym) + suffix(0, i) == best) {
      state = i;
      break;
    }
  }
  result.path[0] = static_cast<int>(state);
  for (std::size_t t = 0; t + 1 < t_len; ++t) {
    const std::size_t sym = static_cast<std::size_t>(obs[t + 1]);
    const double target = suffix(t, state);
    for (std::size_t j = 0; j < n; ++j) {
      if (log_a(state, j) + log_b(j, sym) + suffix(t + 1, j) == target) {
        state = j;
        break;
      }
    }
    result.path[t + 1] = static_cast<int>(state);
  }
  return result;
}

HmmTrainResult hmm_train(const HmmModel& init,
                         const std::vector<SymbolSequence>& sequences,
                         const HmmTrainConfig& config) {
  hmm_validate(init);
  if (sequences.empty()) throw std::invalid_argument("training set is empty");
  for (const auto& seq : sequences) check_symbols(init, seq);

  const std::size_t n = init.num_states;
  const std::size_t m = init.num_symbols;
  HmmTrainResult result;
  result.model = init;

  for (int iter = 0; iter < config.max_iters; ++iter) {
    const HmmModel& model = result.model;
    std::vector<double> init_acc(n, 0.0);
    Matrix trans_num(n, n);
    std::vector<double> trans_den(n, 0.0);
    Matrix emis_num(n, m);
    std::vector<double> emis_den(n, 0.0);
    double total_ll = 0.0;
    std::size_t used = 0;

    for (const auto& obs : sequences) {
      const HmmEvaluation ev = hmm_evaluate(model, obs);
      if (!std::isfinite(ev.log_likelihood)) continue;  // impossible under model
      ++used;
      total_ll += ev.log_likelihood;
      const std::size_t t_len = obs.size();

      for (std::size_t i = 0; i < n; ++i) {
        init_acc[i] += ev.forward(0, i) * ev.backward(0, i);
      }
      for (std::size_t t = 0; t < t_len; ++t) {
        const std::size_t sym = static_cast<std::size_t>(obs[t]);
        for (std::size_t i = 0; i < n; ++i) {
          const double gamma = ev.forward(t, i) * ev.backward(t, i);
          emis_num(i, sym) += gamma;
          emis_den[i] += gamma;
          if (t + 1 < t_len) trans_den[i] += gamma;
        }
        if (t + 1 < t_len) {
          const std::size_t nsym = static_cast<std::size_t>(obs[t + 1]);
          const double inv = ev.scale[t + 1] > 0.0 ? 1.0 / ev.scale[t + 1] : 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            const double base = ev.forward(t, i) * inv;
            if (base == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
              trans_num(i, j) += base * model.transition(i, j) *
                                 model.emission(j, nsym) * ev.backward(t + 1, j);
            }
          }
        }
      }
    }
    result.log_likelihood_history.push_back(total_ll);
    result.iterations = iter + 1;
    if (used == 0) break;  // nothing to learn from

    HmmModel updated = model;
    for (std::size_t i = 0; i < n; ++i) {
      updated.initial[i] = init_acc[i] / static_cast<double>(used);
      if (trans_den[i] > 0.0) {
        for (std::size_t j = 0; j < n; ++j) {
          updated.transition(i, j) = trans_num(i, j) / trans_den[i];
        }
      }
      if (emis_den[i] > 0.0) {
        for (std::size_t k = 0; k < m; ++k) {
          updated.emission(i, k) = emis_num(i, k) / emis_den[i];
        }
      }
      floor_and_normalize(updated.transition.row(i), init.transition.row(i), n);
      floor_and_normalize(updated.emission.row(i), init.emission.row(i), m);
    }
    floor_and_normalize(updated.initial.data(), init.initial.data(), n);

    double delta = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) {
      delta = std::max(delta,
                       std::abs(updated.transition.data[i] - model.transition.data[i]));
    }
    for (std::size_t i = 0; i < n * m; ++i) {
      delta = std::max(delta,
                       std::abs(updated.emission.data[i] - model.emission.data[i]));
    }
    for (std::size_t i = 0; i < n; ++i) {
      delta = std::max(delta, std::abs(updated.initial[i] - model.initial[i]));
    }
    result.model = std::move(updated);
    if (delta < config.tol) break;
  }
  return result;
}

}  // namespace ptseq
