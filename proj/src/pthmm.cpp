#include "ptseq/pthmm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ptseq {

namespace {

constexpr double kDenomFloor = 1e-12;

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void check_symbols(const PthmmModel& model, const SymbolSequence& obs) {
  if (obs.empty()) throw std::invalid_argument("observation sequence is empty");
  for (int s : obs) {
    if (s < 0 || static_cast<std::size_t>(s) >= model.num_symbols) {
      throw std::invalid_argument("observation symbol out of range");
    }
  }
}

void check_degrees(const std::vector<double>& values, const char* what) {
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string(what) + " degree outside [0,1]");
    }
  }
}

bool has_one(const double* row, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (row[i] == 1.0) return true;
  }
  return false;
}

// Divide a row by its max; all-zero rows stay put. Returns whether the row
// now holds a 1.
bool normalize_row(double* row, std::size_t n) {
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, row[i]);
  if (peak == 0.0) return false;
  for (std::size_t i = 0; i < n; ++i) row[i] /= peak;
  return true;
}

std::vector<double> transition_column_maxima(const PthmmModel& model) {
  const std::size_t n = model.num_states;
  std::vector<double> colmax(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      colmax[j] = std::max(colmax[j], model.transition_poss(i, j));
    }
  }
  return colmax;
}

}  // namespace

void pt_validate(const PthmmModel& model) {
  const std::size_t n = model.num_states;
  const std::size_t m = model.num_symbols;
  if (n < 1 || m < 1) throw std::invalid_argument("model needs N >= 1 and M >= 1");
  if (model.transition_poss.rows != n || model.transition_poss.cols != n ||
      model.emission_poss.rows != n || model.emission_poss.cols != m ||
      model.initial_poss.size() != n) {
    throw std::invalid_argument("model matrix dimensions are inconsistent");
  }
  check_degrees(model.transition_poss.data, "transition");
  check_degrees(model.emission_poss.data, "emission");
  check_degrees(model.initial_poss, "initial");
  if (model.max_normalized) {
    bool ok = has_one(model.initial_poss.data(), n);
    for (std::size_t i = 0; i < n && ok; ++i) {
      ok = has_one(model.transition_poss.row(i), n) &&
           has_one(model.emission_poss.row(i), m);
    }
    if (!ok) {
      throw std::invalid_argument("model flagged max-normalized lacks a 1 in some row");
    }
  }
}

void pt_max_normalize(PthmmModel& model) {
  bool ok = normalize_row(model.initial_poss.data(), model.num_states);
  for (std::size_t i = 0; i < model.num_states; ++i) {
    ok = normalize_row(model.transition_poss.row(i), model.num_states) && ok;
    ok = normalize_row(model.emission_poss.row(i), model.num_symbols) && ok;
  }
  model.max_normalized = ok;
}

PthmmModel random_pthmm(std::size_t num_states, std::size_t num_symbols,
                        std::uint64_t seed, Algebra algebra, bool normalize) {
  if (num_states < 1 || num_symbols < 1) {
    throw std::invalid_argument("model needs N >= 1 and M >= 1");
  }
  PthmmModel m;
  m.num_states = num_states;
  m.num_symbols = num_symbols;
  m.algebra = algebra;
  m.transition_poss = Matrix(num_states, num_states);
  m.emission_poss = Matrix(num_states, num_symbols);
  m.initial_poss.resize(num_states);
  std::mt19937_64 rng(seed);
  for (double& v : m.transition_poss.data) v = 0.05 + 0.95 * unit_draw(rng);
  for (double& v : m.emission_poss.data) v = 0.05 + 0.95 * unit_draw(rng);
  for (double& v : m.initial_poss) v = 0.05 + 0.95 * unit_draw(rng);
  if (normalize) pt_max_normalize(m);
  return m;
}

PtForwardResult pt_forward(const PthmmModel& model, const SymbolSequence& obs) {
  check_symbols(model, obs);
  const std::size_t n = model.num_states;
  const std::size_t t_len = obs.size();

  PtForwardResult out;
  out.phi = Matrix(t_len, n);

  if (model.algebra == Algebra::MinMax) {
    for (std::size_t i = 0; i < n; ++i) {
      out.phi(0, i) = std::min(model.initial_poss[i],
                               model.emission_poss(i, static_cast<std::size_t>(obs[0])));
    }
    for (std::size_t t = 1; t < t_len; ++t) {
      const std::size_t sym = static_cast<std::size_t>(obs[t]);
      for (std::size_t j = 0; j < n; ++j) {
        const double emit = model.emission_poss(j, sym);
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          best = std::max(best, std::min({out.phi(t - 1, i),
                                          model.transition_poss(i, j), emit}));
        }
        out.phi(t, j) = best;
      }
    }
  } else {
    // All compositions are max, so each step needs only the running maximum
    // of phi, the per-column transition maxima, and the emission column.
    const std::vector<double> colmax = transition_column_maxima(model);
    double psi_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) psi_max = std::max(psi_max, model.initial_poss[i]);
    double emit_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      emit_max = std::max(emit_max,
                          model.emission_poss(i, static_cast<std::size_t>(obs[0])));
    }
    const double first = std::max(psi_max, emit_max);
    for (std::size_t i = 0; i < n; ++i) out.phi(0, i) = first;
    for (std::size_t t = 1; t < t_len; ++t) {
      const std::size_t sym = static_cast<std::size_t>(obs[t]);
      double phi_max = 0.0;
      for (std::size_t i = 0; i < n; ++i) phi_max = std::max(phi_max, out.phi(t - 1, i));
      for (std::size_t j = 0; j < n; ++j) {
        out.phi(t, j) =
            std::max({phi_max, colmax[j], model.emission_poss(j, sym)});
      }
    }
  }

  double result = 0.0;
  for (std::size_t i = 0; i < n; ++i) result = std::max(result, out.phi(t_len - 1, i));
  out.possibility = result;
  return out;
}

double pt_forward_possibility(const PthmmModel& model, const SymbolSequence& obs) {
  check_symbols(model, obs);
  const std::size_t n = model.num_states;
  const std::size_t t_len = obs.size();

  if (model.algebra == Algebra::PaperLiteral) {
    const std::vector<double> colmax = transition_column_maxima(model);
    double cur = 0.0;
    for (std::size_t i = 0; i < n; ++i) cur = std::max(cur, model.initial_poss[i]);
    for (std::size_t i = 0; i < n; ++i) {
      cur = std::max(cur, model.emission_poss(i, static_cast<std::size_t>(obs[0])));
    }
    // phi(t, j) = max(running_max, colmax[j], emission); its maximum over j
    // feeds the next step's running max.
    for (std::size_t t = 1; t < t_len; ++t) {
      const std::size_t sym = static_cast<std::size_t>(obs[t]);
      double next = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        next = std::max(next,
                        std::max({cur, colmax[j], model.emission_poss(j, sym)}));
      }
      cur = next;
    }
    return cur;
  }

  std::vector<double> cur(n), next(n);
  for (std::size_t i = 0; i < n; ++i) {
    cur[i] = std::min(model.initial_poss[i],
                      model.emission_poss(i, static_cast<std::size_t>(obs[0])));
  }
  for (std::size_t t = 1; t < t_len; ++t) {
    const std::size_t sym = static_cast<std::size_t>(obs[t]);
    for (std::size_t j = 0; j < n; ++j) {
      const double emit = model.emission_poss(j, sym);
      double best = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        best = std::max(best, std::min({cur[i], model.transition_poss(i, j), emit}));
      }
      next[j] = best;
    }
    cur.swap(next);
  }
  double result = 0.0;
  for (std::size_t i = 0; i < n; ++i) result = std::max(result, cur[i]);
  return result;
}

PtCountedResult pt_forward_counted(const PthmmModel& model,
                                   const SymbolSequence& obs) {
  check_symbols(model, obs);
  const std::size_t n = model.num_states;
  const std::size_t t_len = obs.size();

  PtCountedResult out;
  out.result.phi = Matrix(t_len, n);
  Matrix& phi = out.result.phi;
  std::uint64_t ops = 0;

  if (model.algebra == Algebra::MinMax) {
    for (std::size_t i = 0; i < n; ++i) {
      phi(0, i) = std::min(model.initial_poss[i],
                           model.emission_poss(i, static_cast<std::size_t>(obs[0])));
      ops += 1;
    }
    for (std::size_t t = 1; t < t_len; ++t) {
      const std::size_t sym = static_cast<std::size_t>(obs[t]);
      for (std::size_t j = 0; j < n; ++j) {
        const double emit = model.emission_poss(j, sym);
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          best = std::max(best, std::min({phi(t - 1, i),
                                          model.transition_poss(i, j), emit}));
          ops += 3;  // two mins, one max
        }
        phi(t, j) = best;
      }
    }
  } else {
    std::vector<double> colmax(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        colmax[j] = std::max(colmax[j], model.transition_poss(i, j));
        ops += 1;
      }
    }
    double psi_max = 0.0;
    double emit_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      psi_max = std::max(psi_max, model.initial_poss[i]);
      emit_max = std::max(emit_max,
                          model.emission_poss(i, static_cast<std::size_t>(obs[0])));
      ops += 2;
    }
    const double first = std::max(psi_max, emit_max);
    ops += 1;
    for (std::size_t i = 0; i < n; ++i) phi(0, i) = first;
    for (std::size_t t = 1; t < t_len; ++t) {
      const std::size_t sym = static_cast<std::size_t>(obs[t]);
      double phi_max = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        phi_max = std::max(phi_max, phi(t - 1, i));
        ops += 1;
      }
      for (std::size_t j = 0; j < n; ++j) {
        phi(t, j) = std::max({phi_max, colmax[j], model.emission_poss(j, sym)});
        ops += 2;
      }
    }
  }

  double result = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    result = std::max(result, phi(t_len - 1, i));
    ops += 1;
  }
  out.result.possibility = result;
  out.ops = ops;
  return out;
}

Matrix pt_backward(const PthmmModel& model, const SymbolSequence& obs) {
  check_symbols(model, obs);
  const std::size_t n = model.num_states;
  const std::size_t t_len = obs.size();
  const Algebra alg = model.algebra;

  Matrix gamma(t_len, n);
  for (std::size_t i = 0; i < n; ++i) gamma(t_len - 1, i) = 1.0;
  for (std::size_t t = t_len - 1; t > 0; --t) {
    const std::size_t sym = static_cast<std::size_t>(obs[t]);
    for (std::size_t i = 0; i < n; ++i) {
      double best = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double step = conj(
            conj(model.transition_poss(i, j), model.emission_poss(j, sym), alg),
            gamma(t, j), alg);
        best = std::max(best, step);
      }
      gamma(t - 1, i) = best;
    }
  }
  return gamma;
}

PtViterbiResult pt_viterbi(const PthmmModel& model, const SymbolSequence& obs) {
  check_symbols(model, obs);
  const std::size_t n = model.num_states;
  const std::size_t t_len = obs.size();
  const Algebra alg = model.algebra;
  // Conjunction identity: the empty suffix must not change a prefix value.
  const double identity = alg == Algebra::MinMax ? 1.0 : 0.0;

  Matrix suffix(t_len, n);
  for (std::size_t i = 0; i < n; ++i) suffix(t_len - 1, i) = identity;
  for (std::size_t t = t_len - 1; t > 0; --t) {
    const std::size_t sym = static_cast<std::size_t>(obs[t]);
    for (std::size_t i = 0; i < n; ++i) {
      double best = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double step = conj(
            conj(model.transition_poss(i, j), model.emission_poss(j, sym), alg),
            suffix(t, j), alg);
        best = std::max(best, step);
      }
      suffix(t - 1, i) = best;
    }
  }

  const std::size_t first_sym = static_cast<std::size_t>(obs[0]);
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double head =
        conj(model.initial_poss[i], model.emission_poss(i, first_sym), alg);
    best = std::max(best, conj(head, suffix(0, i), alg));
  }

  PtViterbiResult result;
  result.path.resize(t_len);
  result.possibility = best;

  // Walk forward keeping the prefix conjunction: a state extends to an
  // optimal path exactly when conj(prefix, step, suffix) reaches the best
  // value (min/max create no new doubles, so == is exact).
  std::size_t state = 0;
  double prefix = identity;
  for (std::size_t i = 0; i < n; ++i) {
    const double head =
        conj(model.initial_poss[i], model.emission_poss(i, first_sym), alg);
    if (conj(head, suffix(0, i), alg) == best) {
      state = i;
      prefix = head;
      break;
    }
  }
  result.path[0] = static_cast<int>(state);
  for (std::size_t t = 0; t + 1 < t_len; ++t) {
    const std::size_t sym = static_cast<std::size_t>(obs[t + 1]);
    for (std::size_t j = 0; j < n; ++j) {
      const double step = conj(
          conj(model.transition_poss(state, j), model.emission_poss(j, sym), alg),
          prefix, alg);
      if (conj(step, suffix(t + 1, j), alg) == best) {
        state = j;
        prefix = step;
        break;
      }
    }
    result.path[t + 1] = static_cast<int>(state);
  }
  return result;
}

PtTrainResult pt_learn(const PthmmModel& init,
                       const std::vector<SymbolSequence>& sequences,
                       const PtTrainConfig& config) {
  pt_validate(init);
  if (sequences.empty()) throw std::invalid_argument("training set is empty");
  for (const auto& seq : sequences) check_symbols(init, seq);

  const std::size_t n = init.num_states;
  const std::size_t m = init.num_symbols;
  const Algebra alg = init.algebra;
  PtTrainResult result;
  result.model = init;

  for (int iter = 0; iter < config.max_iters; ++iter) {
    const PthmmModel& model = result.model;
    std::vector<double> psi_acc(n, 0.0);
    Matrix theta_num(n, n);
    std::vector<double> theta_den(n, 0.0);
    Matrix pi_num(n, m);
    std::vector<double> pi_den(n, 0.0);
    bool any_used = false;

    for (const auto& obs : sequences) {
      const PtForwardResult fwd = pt_forward(model, obs);
      if (fwd.possibility <= 0.0) continue;  // no evidence to extract
      any_used = true;
      const Matrix gamma = pt_backward(model, obs);
      const double inv_po = 1.0 / fwd.possibility;
      const std::size_t t_len = obs.size();

      for (std::size_t t = 0; t < t_len; ++t) {
        const bool before_last = t + 1 < t_len;
        const std::size_t sym = static_cast<std::size_t>(obs[t]);
        for (std::size_t i = 0; i < n; ++i) {
          const double xi = conj(fwd.phi(t, i), gamma(t, i), alg) * inv_po;
          if (t == 0) psi_acc[i] = std::max(psi_acc[i], xi);
          pi_num(i, sym) = std::max(pi_num(i, sym), xi);
          pi_den[i] = std::max(pi_den[i], xi);
          if (before_last) theta_den[i] = std::max(theta_den[i], xi);
        }
        if (before_last) {
          const std::size_t nsym = static_cast<std::size_t>(obs[t + 1]);
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
              const double eps =
                  conj(conj(conj(fwd.phi(t, i), model.transition_poss(i, j), alg),
                            model.emission_poss(j, nsym), alg),
                       gamma(t + 1, j), alg) *
                  inv_po;
              theta_num(i, j) = std::max(theta_num(i, j), eps);
            }
          }
        }
      }
    }
    result.iterations = iter + 1;
    if (!any_used) break;

    PthmmModel updated = model;
    updated.initial_poss = psi_acc;
    for (std::size_t i = 0; i < n; ++i) {
      if (theta_den[i] > 0.0) {
        const double den = std::max(theta_den[i], kDenomFloor);
        for (std::size_t j = 0; j < n; ++j) {
          updated.transition_poss(i, j) = theta_num(i, j) / den;
        }
      }
      if (pi_den[i] > 0.0) {
        const double den = std::max(pi_den[i], kDenomFloor);
        for (std::size_t k = 0; k < m; ++k) {
          updated.emission_poss(i, k) = pi_num(i, k) / den;
        }
      }
    }
    pt_max_normalize(updated);

    double delta = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) {
      delta = std::max(delta, std::abs(updated.transition_poss.data[i] -
                                       model.transition_poss.data[i]));
    }
    for (std::size_t i = 0; i < n * m; ++i) {
      delta = std::max(delta, std::abs(updated.emission_poss.data[i] -
                                       model.emission_poss.data[i]));
    }
    for (std::size_t i = 0; i < n; ++i) {
      delta = std::max(delta, std::abs(updated.initial_poss[i] - model.initial_poss[i]));
    }
    result.model = std::move(updated);
    if (delta < config.tol) break;
  }
  return result;
}

std::vector<PtScore> pt_classify(const std::vector<PthmmModel>& models,
                                 const SymbolSequence& obs) {
  if (models.empty()) throw std::invalid_argument("model list is empty");
  for (const auto& model : models) {
    if (model.num_symbols != models.front().num_symbols) {
      throw std::invalid_argument("models disagree on the symbol alphabet");
    }
  }
  std::vector<PtScore> scores;
  scores.reserve(models.size());
  for (std::size_t k = 0; k < models.size(); ++k) {
    scores.push_back({k, pt_forward_possibility(models[k], obs)});
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const PtScore& a, const PtScore& b) {
                     return a.possibility > b.possibility;
                   });
  return scores;
}

}  // namespace ptseq
