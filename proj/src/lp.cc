// Copyright 2026 The Deviation Rating Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "devrating/lp.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "Eigen/LU"
#include "devrating/errors.h"

namespace devrating {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Column layout: [0, n) structural, [n, n + m) slacks, [n + m, n + 2m)
// artificials. Rows with negative right-hand side are negated up front so
// that b >= 0 and artificials can start at value b.
class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const LpOptions& options)
      : lp_(lp),
        options_(options),
        m_(static_cast<int>(lp.b.size())),
        n_(static_cast<int>(lp.c.size())) {
    if (lp.a.rows() != m_ || lp.a.cols() != n_ ||
        static_cast<int>(lp.sense.size()) != m_) {
      throw InputError("linear program dimensions are inconsistent");
    }
    sign_ = Eigen::VectorXd::Ones(m_);
    b_ = lp.b;
    slack_coef_.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      RowSense sense = lp.sense[i];
      if (b_(i) < 0) {
        sign_(i) = -1.0;
        b_(i) = -b_(i);
        if (sense == RowSense::kLessEqual) {
          sense = RowSense::kGreaterEqual;
        } else if (sense == RowSense::kGreaterEqual) {
          sense = RowSense::kLessEqual;
        }
      }
      if (sense == RowSense::kLessEqual) slack_coef_[i] = 1.0;
      if (sense == RowSense::kGreaterEqual) slack_coef_[i] = -1.0;
    }
    const int total = n_ + 2 * m_;
    position_.assign(total, -1);
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      basis_[i] = slack_coef_[i] > 0 ? Slack(i) : Artificial(i);
      position_[basis_[i]] = i;
    }
    binv_ = Eigen::MatrixXd::Identity(m_, m_);
    xb_ = b_;
  }

  LpSolution Run() {
    LpSolution solution;
    bool needs_phase_one = false;
    for (int i = 0; i < m_; ++i) needs_phase_one |= IsArtificial(basis_[i]);

    if (needs_phase_one) {
      phase_ = 1;
      const LpStatus status = Iterate();
      if (status == LpStatus::kIterationLimit) {
        solution.status = status;
        solution.iterations = iterations_;
        return solution;
      }
      double infeasibility = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (IsArtificial(basis_[i])) infeasibility += std::max(0.0, xb_(i));
      }
      const double scale = std::max(1.0, b_.lpNorm<Eigen::Infinity>());
      if (infeasibility > 10 * options_.feasibility_tol * scale) {
        solution.status = LpStatus::kInfeasible;
        solution.iterations = iterations_;
        solution.objective = infeasibility;
        return solution;
      }
      DriveOutArtificials();
    }

    phase_ = 2;
    solution.status = Iterate();
    solution.iterations = iterations_;
    Refactor();
    solution.x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) solution.x(basis_[i]) = std::max(0.0, xb_(i));
    }
    solution.objective = lp_.c.dot(solution.x);
    solution.duals = sign_.cwiseProduct(Prices());
    return solution;
  }

 private:
  int Slack(int row) const { return n_ + row; }
  int Artificial(int row) const { return n_ + m_ + row; }
  bool IsSlack(int col) const { return col >= n_ && col < n_ + m_; }
  bool IsArtificial(int col) const { return col >= n_ + m_; }

  double Cost(int col) const {
    if (phase_ == 1) return IsArtificial(col) ? 1.0 : 0.0;
    return col < n_ ? lp_.c(col) : 0.0;
  }

  // B^-1 times column `col`.
  Eigen::VectorXd Direction(int col) const {
    if (col < n_) return binv_ * lp_.a.col(col).cwiseProduct(sign_);
    if (IsSlack(col)) return binv_.col(col - n_) * slack_coef_[col - n_];
    return binv_.col(col - n_ - m_);
  }

  // Simplex multipliers for the (sign-normalized) rows.
  Eigen::VectorXd Prices() const {
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb(i) = Cost(basis_[i]);
    return binv_.transpose() * cb;
  }

  bool Eligible(int col) const {
    if (position_[col] >= 0) return false;
    if (IsSlack(col)) return slack_coef_[col - n_] != 0.0;
    // Artificials never re-enter once they have left the basis.
    if (IsArtificial(col)) return false;
    return true;
  }

  // Returns the entering column or -1 at optimality.
  int Price() {
    const Eigen::VectorXd y = Prices();
    const Eigen::VectorXd signed_y = sign_.cwiseProduct(y);
    Eigen::VectorXd reduced = -(lp_.a.transpose() * signed_y);
    if (phase_ == 2) reduced += lp_.c;
    int best = -1;
    double best_value = -options_.optimality_tol;
    auto consider = [&](int col, double d) {
      if (d >= -options_.optimality_tol || !Eligible(col)) return false;
      if (bland_) {
        if (best < 0) best = col;
        return true;
      }
      if (d < best_value) {
        best_value = d;
        best = col;
      }
      return false;
    };
    for (int j = 0; j < n_; ++j) {
      if (consider(j, reduced(j))) return best;
    }
    for (int i = 0; i < m_; ++i) {
      if (slack_coef_[i] == 0.0) continue;
      if (consider(Slack(i), -slack_coef_[i] * y(i))) return best;
    }
    return best;
  }

  // Harris two-pass ratio test. Returns the leaving row or -1 if unbounded.
  int Ratio(const Eigen::VectorXd& w) const {
    const double piv = options_.pivot_tol;
    double bound = kInf;
    for (int i = 0; i < m_; ++i) {
      if (w(i) > piv) {
        bound = std::min(bound,
                         (std::max(0.0, xb_(i)) + options_.feasibility_tol) /
                             w(i));
      }
    }
    if (bound == kInf) return -1;
    int row = -1;
    if (bland_) {
      double best = kInf;
      for (int i = 0; i < m_; ++i) {
        if (w(i) > piv) best = std::min(best, std::max(0.0, xb_(i)) / w(i));
      }
      for (int i = 0; i < m_; ++i) {
        if (w(i) <= piv || std::max(0.0, xb_(i)) / w(i) > best + 1e-15) continue;
        if (row < 0 || basis_[i] < basis_[row]) row = i;
      }
      return row;
    }
    double largest = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (w(i) <= piv) continue;
      if (std::max(0.0, xb_(i)) / w(i) <= bound && w(i) > largest) {
        largest = w(i);
        row = i;
      }
    }
    return row;
  }

  void Pivot(int row, int col, const Eigen::VectorXd& w) {
    const double theta = std::max(0.0, xb_(row)) / w(row);
    xb_ -= theta * w;
    xb_(row) = theta;
    position_[basis_[row]] = -1;
    basis_[row] = col;
    position_[col] = row;
    const Eigen::RowVectorXd pivot_row = binv_.row(row) / w(row);
    for (int i = 0; i < m_; ++i) {
      if (i == row || w(i) == 0.0) continue;
      binv_.row(i) -= w(i) * pivot_row;
    }
    binv_.row(row) = pivot_row;
    if (++since_refactor_ >= options_.refactor_interval) Refactor();
  }

  void Refactor() {
    Eigen::MatrixXd basis_matrix(m_, m_);
    for (int i = 0; i < m_; ++i) {
      const int col = basis_[i];
      if (col < n_) {
        basis_matrix.col(i) = lp_.a.col(col).cwiseProduct(sign_);
      } else {
        basis_matrix.col(i).setZero();
        if (IsSlack(col)) {
          basis_matrix(col - n_, i) = slack_coef_[col - n_];
        } else {
          basis_matrix(col - n_ - m_, i) = 1.0;
        }
      }
    }
    binv_ = basis_matrix.partialPivLu().inverse();
    xb_ = binv_ * b_;
    since_refactor_ = 0;
  }

  LpStatus Iterate() {
    int degenerate_run = 0;
    bland_ = false;
    bool verified = false;
    while (true) {
      if (iterations_ >= options_.max_iterations) {
        return LpStatus::kIterationLimit;
      }
      const int col = Price();
      if (col < 0) {
        // Confirm optimality against a fresh factorization.
        if (verified || since_refactor_ == 0) return LpStatus::kOptimal;
        Refactor();
        verified = true;
        continue;
      }
      verified = false;
      const Eigen::VectorXd w = Direction(col);
      const int row = Ratio(w);
      if (row < 0) return LpStatus::kUnbounded;
      const bool degenerate = std::max(0.0, xb_(row)) / w(row) <= 1e-12;
      Pivot(row, col, w);
      ++iterations_;
      if (degenerate) {
        if (++degenerate_run > options_.degenerate_limit) bland_ = true;
      } else {
        degenerate_run = 0;
        bland_ = false;
      }
    }
  }

  // Replaces zero-valued basic artificials with structural or slack columns
  // where the row permits; rows that remain are linearly redundant.
  void DriveOutArtificials() {
    for (int row = 0; row < m_; ++row) {
      if (!IsArtificial(basis_[row])) continue;
      const Eigen::VectorXd rho = binv_.row(row).transpose();
      const Eigen::VectorXd structural =
          lp_.a.transpose() * sign_.cwiseProduct(rho);
      int best = -1;
      double best_abs = 1e-7;
      for (int j = 0; j < n_; ++j) {
        if (position_[j] < 0 && std::fabs(structural(j)) > best_abs) {
          best_abs = std::fabs(structural(j));
          best = j;
        }
      }
      for (int i = 0; i < m_; ++i) {
        if (slack_coef_[i] == 0.0 || position_[Slack(i)] >= 0) continue;
        if (std::fabs(rho(i)) > best_abs) {
          best_abs = std::fabs(rho(i));
          best = Slack(i);
        }
      }
      if (best < 0) continue;
      const Eigen::VectorXd w = Direction(best);
      // Degenerate exchange: the artificial is at (numerical) zero.
      const double theta = xb_(row) / w(row);
      xb_ -= theta * w;
      xb_(row) = theta;
      position_[basis_[row]] = -1;
      basis_[row] = best;
      position_[best] = row;
      const Eigen::RowVectorXd pivot_row = binv_.row(row) / w(row);
      for (int i = 0; i < m_; ++i) {
        if (i != row && w(i) != 0.0) binv_.row(i) -= w(i) * pivot_row;
      }
      binv_.row(row) = pivot_row;
    }
    Refactor();
  }

  const LinearProgram& lp_;
  const LpOptions options_;
  const int m_;
  const int n_;
  Eigen::VectorXd sign_;
  Eigen::VectorXd b_;
  std::vector<double> slack_coef_;
  std::vector<int> basis_;
  std::vector<int> position_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  int phase_ = 1;
  int iterations_ = 0;
  int since_refactor_ = 0;
  bool bland_ = false;
};

}  // namespace

std::string ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration limit";
  }
  return "unknown";
}

LpSolution SolveLinearProgram(const LinearProgram& lp,
                              const LpOptions& options) {
  return RevisedSimplex(lp, options).Run();
}

}  // namespace devrating
