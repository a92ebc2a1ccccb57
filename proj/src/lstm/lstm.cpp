#include "avtrack/lstm/lstm.hpp"

#include <cmath>

namespace avtrack::lstm {

void LstmConfig::validate() const {
  if (hidden_units < 1) throw std::invalid_argument("hidden_units must be >= 1");
  if (fc1_units < 1) throw std::invalid_argument("fc1_units must be >= 1");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw std::invalid_argument("dropout_rate must be in [0, 1)");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (window_len < 1) throw std::invalid_argument("window_len must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
}

std::size_t parameter_count(const LstmConfig& c) {
  const auto H = static_cast<std::size_t>(c.hidden_units);
  const auto F = static_cast<std::size_t>(c.fc1_units);
  return 4 * H + 4 * H * H + 4 * H + F * H + F + F + 1;
}

namespace {

using Eigen::Map;
using Eigen::MatrixXd;
using Eigen::VectorXd;

template <typename V>
struct Views {
  using Vec = std::conditional_t<std::is_const_v<V>, Map<const VectorXd>, Map<VectorXd>>;
  using Mat = std::conditional_t<std::is_const_v<V>, Map<const MatrixXd>, Map<MatrixXd>>;
  Vec Wx, b, b1, W2;
  Mat Wh, W1;
  double b2;

  template <typename P>
  Views(P* data, int H, int F)
      : Wx(data, 4 * H),
        b(data + 4 * H + 4 * H * H, 4 * H),
        b1(data + 8 * H + 4 * H * H + F * H, F),
        W2(data + 8 * H + 4 * H * H + F * H + F, F),
        Wh(data + 4 * H, 4 * H, H),
        W1(data + 8 * H + 4 * H * H, F, H),
        b2(data[8 * H + 4 * H * H + F * H + 2 * F]) {}
};

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

struct StepCache {
  VectorXd i, f, g, o, c, h, tanh_c;
};

struct SampleCache {
  std::vector<StepCache> steps;
  VectorXd a1;    // FC1 output before dropout
  VectorXd mask;  // inverted-dropout scale per FC1 unit
  double y = 0.0;
};

void check_input(const ClockModelLSTM& m, std::span<const double> seq) {
  if (static_cast<int>(seq.size()) != m.config.window_len)
    throw std::invalid_argument("LSTM input length " + std::to_string(seq.size()) + " != window_len " +
                                std::to_string(m.config.window_len));
  for (double v : seq)
    if (std::isnan(v)) throw std::invalid_argument("LSTM input contains NaN");
}

double run(const ClockModelLSTM& m, std::span<const double> seq, Rng* dropout_rng, SampleCache* cache) {
  const int H = m.config.hidden_units, F = m.config.fc1_units;
  const Views<const double> w(m.theta.data(), H, F);
  VectorXd h = VectorXd::Zero(H), c = VectorXd::Zero(H);
  if (cache) cache->steps.clear();
  for (double x : seq) {
    const VectorXd z = w.Wx * x + w.Wh * h + w.b;
    StepCache s;
    s.i = z.segment(0, H).unaryExpr(&sigmoid);
    s.f = z.segment(H, H).unaryExpr(&sigmoid);
    s.g = z.segment(2 * H, H).array().tanh();
    s.o = z.segment(3 * H, H).unaryExpr(&sigmoid);
    c = s.f.cwiseProduct(c) + s.i.cwiseProduct(s.g);
    s.tanh_c = c.array().tanh();
    h = s.o.cwiseProduct(s.tanh_c);
    if (cache) {
      s.c = c;
      s.h = h;
      cache->steps.push_back(std::move(s));
    }
  }
  VectorXd a1 = w.W1 * h + w.b1;
  VectorXd mask = VectorXd::Ones(F);
  const double rate = m.config.dropout_rate;
  if (dropout_rng && rate > 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < F; ++k) mask(k) = u(*dropout_rng) < rate ? 0.0 : 1.0 / (1.0 - rate);
  }
  const double y = w.W2.dot(a1.cwiseProduct(mask)) + w.b2;
  if (cache) {
    cache->a1 = std::move(a1);
    cache->mask = std::move(mask);
    cache->y = y;
  }
  return y;
}

}  // namespace

ClockModelLSTM build(const LstmConfig& config) {
  config.validate();
  ClockModelLSTM m;
  m.config = config;
  const int H = config.hidden_units, F = config.fc1_units;
  m.theta = VectorXd::Zero(static_cast<Eigen::Index>(parameter_count(config)));
  Rng rng = derived_rng(config.seed, 0x157a);
  auto glorot = [&](auto&& mat, int fan_in, int fan_out) {
    const double lim = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> u(-lim, lim);
    for (Eigen::Index k = 0; k < mat.size(); ++k) mat.data()[k] = u(rng);
  };
  Views<double> w(m.theta.data(), H, F);
  glorot(w.Wx, 1, 4 * H);
  glorot(w.Wh, H, 4 * H);
  glorot(w.W1, H, F);
  glorot(w.W2, F, 1);
  w.b.segment(H, H).setOnes();
  return m;
}

double forward(const ClockModelLSTM& model, std::span<const double> sequence) {
  check_input(model, sequence);
  return run(model, sequence, nullptr, nullptr);
}

Eigen::VectorXd final_hidden(const ClockModelLSTM& model, std::span<const double> sequence) {
  check_input(model, sequence);
  SampleCache cache;
  run(model, sequence, nullptr, &cache);
  return cache.steps.back().h;
}

double loss_and_gradient(const ClockModelLSTM& model, const Batch& batch, Eigen::VectorXd* grad,
                         Rng* dropout_rng) {
  if (batch.inputs.size() != batch.targets.size() || batch.inputs.empty())
    throw std::invalid_argument("batch inputs and targets must be non-empty and aligned");
  const int H = model.config.hidden_units, F = model.config.fc1_units;
  const auto N = static_cast<double>(batch.inputs.size());
  const Views<const double> w(model.theta.data(), H, F);
  if (grad) grad->setZero(model.theta.size());
  double loss = 0.0;
  SampleCache cache;
  for (std::size_t s = 0; s < batch.inputs.size(); ++s) {
    const auto& seq = batch.inputs[s];
    check_input(model, seq);
    const double y = run(model, seq, dropout_rng, grad ? &cache : nullptr);
    const double err = y - batch.targets[s];
    loss += err * err / N;
    if (!grad) continue;

    Views<double> g(grad->data(), H, F);
    const double dy = 2.0 * err / N;
    const VectorXd dropped = cache.a1.cwiseProduct(cache.mask);
    g.W2 += dy * dropped;
    grad->data()[grad->size() - 1] += dy;
    const VectorXd da1 = (dy * w.W2).cwiseProduct(cache.mask);
    const VectorXd& h_last = cache.steps.back().h;
    g.W1 += da1 * h_last.transpose();
    g.b1 += da1;
    VectorXd dh = w.W1.transpose() * da1;
    VectorXd dc = VectorXd::Zero(H);
    VectorXd dz(4 * H);
    for (int t = static_cast<int>(seq.size()) - 1; t >= 0; --t) {
      const StepCache& st = cache.steps[static_cast<std::size_t>(t)];
      const VectorXd c_prev = t > 0 ? cache.steps[static_cast<std::size_t>(t) - 1].c : VectorXd::Zero(H);
      const VectorXd h_prev = t > 0 ? cache.steps[static_cast<std::size_t>(t) - 1].h : VectorXd::Zero(H);
      const VectorXd d_o = dh.cwiseProduct(st.tanh_c);
      dc += dh.cwiseProduct(st.o).cwiseProduct((1.0 - st.tanh_c.array().square()).matrix());
      const VectorXd d_i = dc.cwiseProduct(st.g);
      const VectorXd d_g = dc.cwiseProduct(st.i);
      const VectorXd d_f = dc.cwiseProduct(c_prev);
      dz.segment(0, H) = d_i.array() * st.i.array() * (1.0 - st.i.array());
      dz.segment(H, H) = d_f.array() * st.f.array() * (1.0 - st.f.array());
      dz.segment(2 * H, H) = d_g.array() * (1.0 - st.g.array().square());
      dz.segment(3 * H, H) = d_o.array() * st.o.array() * (1.0 - st.o.array());
      g.Wx += dz * seq[static_cast<std::size_t>(t)];
      g.Wh += dz * h_prev.transpose();
      g.b += dz;
      dh = w.Wh.transpose() * dz;
      dc = dc.cwiseProduct(st.f);
    }
  }
  return loss;
}

double gradient_check(const ClockModelLSTM& model, const Batch& batch) {
  Eigen::VectorXd analytic;
  loss_and_gradient(model, batch, &analytic);
  ClockModelLSTM probe = model;
  constexpr double kStep = 1e-5;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < probe.theta.size(); ++k) {
    const double orig = probe.theta(k);
    probe.theta(k) = orig + kStep;
    const double up = loss_and_gradient(probe, batch, nullptr);
    probe.theta(k) = orig - kStep;
    const double down = loss_and_gradient(probe, batch, nullptr);
    probe.theta(k) = orig;
    const double numeric = (up - down) / (2.0 * kStep);
    const double a = analytic(k);
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(a - numeric) / denom);
  }
  return worst;
}

}  // namespace avtrack::lstm
