#include "avtrack/pipeline/run.hpp"

#include <algorithm>

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <optional>

#include "avtrack/clocksync/kf1.hpp"
#include "avtrack/mlat/mlat.hpp"
#include "avtrack/pipeline/classify.hpp"
#include "avtrack/pipeline/scheduler.hpp"
#include "avtrack/random.hpp"

namespace avtrack::pipeline {

namespace {

using clocksync::OffsetSample;
using geo::CartesianPosition;

class TruthIndex {
 public:
  explicit TruthIndex(const std::vector<TruthRow>& rows) {
    for (const auto& r : rows) by_av_[r.av_id].push_back(&r);
    for (auto& [id, v] : by_av_)
      std::sort(v.begin(), v.end(), [](const TruthRow* a, const TruthRow* b) { return a->time < b->time; });
  }

  /// Transmission nearest in time to `t`, if one lies within `tolerance`.
  const TruthRow* nearest(int av_id, double t, double tolerance = 2.0) const {
    const auto it = by_av_.find(av_id);
    if (it == by_av_.end() || it->second.empty()) return nullptr;
    const auto& v = it->second;
    auto hi = std::lower_bound(v.begin(), v.end(), t, [](const TruthRow* r, double x) { return r->time < x; });
    const TruthRow* best = nullptr;
    if (hi != v.end()) best = *hi;
    if (hi != v.begin() && (!best || t - (*(hi - 1))->time <= best->time - t)) best = *(hi - 1);
    return best && std::abs(best->time - t) <= tolerance ? best : nullptr;
  }

 private:
  std::map<int, std::vector<const TruthRow*>> by_av_;
};

geo::GeodeticPosition pick_origin(const std::vector<BroadcastRecord>& records) {
  std::optional<Reception> gsn, any;
  for (const auto& r : records)
    for (const auto& rx : r.receptions) {
      if (!any || rx.rx_id < any->rx_id) any = rx;
      if (rx.kind == ReceiverKind::GSN && (!gsn || rx.rx_id < gsn->rx_id)) gsn = rx;
    }
  if (gsn) return gsn->position;
  if (any) return any->position;
  return {};
}

// Offsets of every SN in one trusted record, combined over its GSNs.
struct RecordOffsets {
  std::vector<OffsetSample> samples;
};

RecordOffsets offsets_in_record(const BroadcastRecord& rec, const CartesianPosition& av,
                                const geo::GeodeticPosition& origin, PairingPolicy pairing) {
  RecordOffsets out;
  std::vector<std::pair<const Reception*, CartesianPosition>> gsns;
  for (const auto& rx : rec.receptions)
    if (rx.kind == ReceiverKind::GSN) gsns.emplace_back(&rx, geo::geodetic_to_local(rx.position, origin));
  if (gsns.empty()) return out;
  for (const auto& rx : rec.receptions) {
    if (rx.kind != ReceiverKind::SN) continue;
    const CartesianPosition sn_pos = geo::geodetic_to_local(rx.position, origin);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& [g, g_pos] : gsns) {
      sum += clocksync::measure_offset(g->toa, rx.toa, av, g_pos, sn_pos);
      ++n;
      if (pairing == PairingPolicy::FirstGsn) break;
    }
    out.samples.push_back({rec.server_time, sum / static_cast<double>(n), rx.rx_id, gsns.front().first->rx_id,
                           rec.av_id});
  }
  return out;
}

struct Pending {
  OffsetSample sample;
  std::size_t count = 0;
};

struct SnState {
  SyncDiagnostics diag;
  std::optional<Pending> pending;
  double last_retrain = 0.0;
  bool starvation_logged = false;
  int trainings = 0;
  std::optional<clocksync::ClockModelAR> ar;
  std::optional<lstm::ClockModelLSTM> net;
};

struct Track {
  tracker::TrackState state;
  int rejected = 0;  // consecutive gated fixes
};

class Runner {
 public:
  Runner(const RunConfig& cfg, const std::vector<BroadcastRecord>& records, const std::vector<TruthRow>& truth)
      : cfg_(cfg), records_(records), truth_(truth) {
    cfg_.validate();
    report_.mode = cfg.mode;
    report_.kf2 = cfg.use_kf2;
    report_.frame_origin = pick_origin(records);
  }

  RunReport run() {
    std::vector<const BroadcastRecord*> order;
    for (const auto& r : records_) order.push_back(&r);
    std::stable_sort(order.begin(), order.end(),
                     [](const BroadcastRecord* a, const BroadcastRecord* b) { return a->server_time < b->server_time; });
    if (!order.empty()) epoch_ = order.front()->server_time;

    for (const BroadcastRecord* rec : order) {
      ++report_.counters.records;
      flush_before(rec->server_time);
      if (classify(*rec, cfg_.classify) == Role::Trusted) {
        ++report_.counters.trusted_records;
        on_trusted(*rec);
      } else {
        ++report_.counters.target_records;
        on_target(*rec);
      }
    }
    flush_before(std::numeric_limits<double>::infinity());
    for (auto& [id, sn] : sns_) report_.sync[id] = std::move(sn.diag);
    return std::move(report_);
  }

 private:
  SnState& sn(int id) {
    auto [it, inserted] = sns_.try_emplace(id);
    if (inserted) {
      it->second.diag.sn_id = id;
      it->second.last_retrain = epoch_;
    }
    return it->second;
  }

  CartesianPosition local(const geo::GeodeticPosition& p) const {
    return geo::geodetic_to_local(p, report_.frame_origin);
  }

  void on_trusted(const BroadcastRecord& rec) {
    const TruthRow* tr = truth_.nearest(rec.av_id, rec.server_time);
    if (!tr) {
      ++report_.counters.missing_truth;
      return;
    }
    const auto offs = offsets_in_record(rec, local(tr->position), report_.frame_origin, cfg_.pairing);
    for (const auto& s : offs.samples) {
      SnState& st = sn(s.sn_id);
      if (st.pending && st.pending->sample.t == s.t) {
        auto& p = *st.pending;
        p.sample.eta = (p.sample.eta * static_cast<double>(p.count) + s.eta) / static_cast<double>(p.count + 1);
        ++p.count;
      } else {
        if (st.pending) commit(st, st.pending->sample);
        st.pending = Pending{s, 1};
      }
    }
  }

  void flush_before(double t) {
    for (auto& [id, st] : sns_)
      if (st.pending && st.pending->sample.t < t) {
        const OffsetSample s = st.pending->sample;
        st.pending.reset();
        commit(st, s);
      }
  }

  std::size_t window_count(const SnState& st, double now) const {
    const auto& v = st.diag.samples;
    const auto lo = std::lower_bound(v.begin(), v.end(), now - cfg_.retrain_period,
                                     [](const OffsetSample& s, double x) { return s.t < x; });
    return static_cast<std::size_t>(v.end() - lo);
  }

  void commit(SnState& st, const OffsetSample& s) {
    // Residual of the current predictor before it sees the sample.
    const auto pred = predict(st, s.t);
    if (pred) st.diag.residuals.push_back(s.eta - *pred);
    st.diag.predicted.push_back(pred ? *pred : std::numeric_limits<double>::quiet_NaN());
    if (cfg_.mode == SyncMode::Arima && st.ar) clocksync::kf1_update_in_place(*st.ar, s);
    st.diag.samples.push_back(s);
    if (cfg_.mode == SyncMode::Arima || cfg_.mode == SyncMode::Lstm) maybe_retrain(st, s.t);
  }

  void maybe_retrain(SnState& st, double now) {
    const std::size_t n = window_count(st, now);
    switch (retrain_scheduler(now, st.last_retrain, n, cfg_.retrain_period, cfg_.min_training_msgs)) {
      case RetrainDecision::Wait:
        return;
      case RetrainDecision::Starved:
        if (!st.starvation_logged) {
          st.diag.retrains.push_back({now, n, false, "data starvation"});
          st.starvation_logged = true;
        }
        return;
      case RetrainDecision::Retrain:
        break;
    }
    st.last_retrain = now;
    st.starvation_logged = false;
    const auto& v = st.diag.samples;
    const std::span<const OffsetSample> window(v.data() + (v.size() - n), n);
    try {
      if (cfg_.mode == SyncMode::Arima) {
        st.ar = clocksync::train_ar_model(window, st.diag.sn_id, cfg_.kf1, cfg_.order_selection);
        st.diag.retrains.push_back({now, n, true, clocksync::to_string(st.ar->order)});
      } else {
        lstm::LstmConfig lc = cfg_.lstm;
        lc.seed = splitmix64(cfg_.seed ^ splitmix64(static_cast<std::uint64_t>(st.diag.sn_id) * 1000003ULL +
                                                    static_cast<std::uint64_t>(st.trainings)));
        lstm::ClockModelLSTM m = lstm::build(lc);
        const auto rep = lstm::train(m, window);
        m.sn_id = st.diag.sn_id;
        st.net = std::move(m);
        st.diag.retrains.push_back({now, n, true, "lstm epochs=" + std::to_string(rep.epochs_run)});
      }
      ++st.trainings;
    } catch (const std::exception& e) {
      st.diag.retrains.push_back({now, n, false, e.what()});
    }
  }

  /// Offset estimate for an SN at time t, or nothing when quarantined.
  std::optional<double> predict(const SnState& st, double t) const {
    const auto& v = st.diag.samples;
    switch (cfg_.mode) {
      case SyncMode::None:
      case SyncMode::Gsn:
        return std::nullopt;
      case SyncMode::Prior:
        if (v.empty() || t - v.back().t > cfg_.sample_expiry) return std::nullopt;
        return v.back().eta;
      case SyncMode::Arima:
        if (!st.ar || t - st.ar->kf1.t > cfg_.sample_expiry) return std::nullopt;
        return clocksync::kf1_predict_offset(*st.ar, t).eta;
      case SyncMode::Lstm: {
        if (!st.net || v.size() < static_cast<std::size_t>(cfg_.lstm.window_len) || t - v.back().t > cfg_.sample_expiry) return std::nullopt;
        return lstm::predict_offset(*st.net, v, t);
      }
    }
    return std::nullopt;
  }

  void on_target(const BroadcastRecord& rec) {
    const double t = rec.server_time;
    std::vector<CartesianPosition> anchors;
    std::vector<double> toas, sigmas;
    std::size_t origin = 0;
    bool have_gsn = false;
    for (const auto& rx : rec.receptions) {
      double toa = rx.toa;
      if (rx.kind == ReceiverKind::SN && cfg_.mode != SyncMode::None && cfg_.mode != SyncMode::Gsn) {
        SnState& st = sn(rx.rx_id);
        const auto eta = predict(st, t);
        if (!eta) {
          ++st.diag.quarantined;
          continue;
        }
        toa += *eta;
      }
      if (rx.kind == ReceiverKind::GSN && !have_gsn) {
        have_gsn = true;
        origin = anchors.size();
      }
      anchors.push_back(local(rx.position));
      toas.push_back(toa);
      sigmas.push_back(rx.kind == ReceiverKind::GSN ? cfg_.toa_sigma_gsn : cfg_.toa_sigma_sn);
    }
    if (static_cast<int>(anchors.size()) < cfg_.min_receivers) {
      ++report_.counters.too_few_receivers;
      return;
    }

    auto track_it = tracks_.find(rec.av_id);
    std::optional<CartesianPosition> fix;
    try {
      fix = mlat::solve_shifted(anchors, toas, origin).position;
    } catch (const mlat::AmbiguityError& e) {
      if (track_it != tracks_.end() && t > track_it->second.state.t) {
        const auto pred = tracker::predict(track_it->second.state, cfg_.motion, t - track_it->second.state.t);
        const Eigen::Vector3d p = pred.s.head<3>();
        const auto& c = e.candidates;
        fix = (c[0].position.vec() - p).norm() <= (c[1].position.vec() - p).norm() ? c[0].position : c[1].position;
        ++report_.counters.ambiguous_resolved;
      } else {
        ++report_.counters.ambiguous_dropped;
        return;
      }
    } catch (const mlat::MlatError&) {
      ++report_.counters.mlat_failures;
      return;
    }

    CartesianPosition est = *fix;
    if (cfg_.use_kf2) {
      tracker::MotionModel model = cfg_.motion;
      if (cfg_.propagate_R) {
        try {
          Eigen::Matrix3d cov = mlat::position_covariance(anchors, *fix, sigmas);
          cov = (0.5 * (cov + cov.transpose())).eval() + Eigen::Matrix3d::Identity();
          if (cov.allFinite() && cov.ldlt().isPositive()) model.R = cov;
        } catch (const std::exception&) {
        }
      }
      if (track_it == tracks_.end()) {
        Track tr{tracker::update(tracker::initial_state(*fix, t), *fix, model)};
        track_it = tracks_.emplace(rec.av_id, tr).first;
      } else if (t > track_it->second.state.t) {
        auto& trk = track_it->second;
        const auto pred = tracker::predict(trk.state, model, t - trk.state.t);
        if (cfg_.kf2_gate > 0.0 && tracker::innovation_nis(pred, *fix, model) > cfg_.kf2_gate) {
          if (++trk.rejected >= cfg_.kf2_gate_reset) {
            trk = Track{tracker::update(tracker::initial_state(*fix, t), *fix, model)};
          } else {
            trk.state = pred;
            ++report_.counters.gated;
          }
        } else {
          trk.rejected = 0;
          trk.state = tracker::update(pred, *fix, model);
        }
      }
      est = CartesianPosition::from(track_it->second.state.s.head<3>());
    }

    const TruthRow* tr = truth_.nearest(rec.av_id, t);
    if (!tr) {
      ++report_.counters.missing_truth;
      return;
    }
    FixRow row;
    row.av_id = rec.av_id;
    row.t = t;
    row.n_receivers = static_cast<int>(anchors.size());
    row.truth = local(tr->position);
    row.raw = *fix;
    row.kf = est;
    row.raw_error = tracker::localization_error(row.truth, row.raw);
    row.kf_error = tracker::localization_error(row.truth, row.kf);
    report_.fixes.push_back(row);
  }

  RunConfig cfg_;
  const std::vector<BroadcastRecord>& records_;
  TruthIndex truth_;
  RunReport report_;
  double epoch_ = 0.0;
  std::map<int, SnState> sns_;
  std::map<int, Track> tracks_;
};

}  // namespace

std::map<int, std::vector<OffsetSample>> measure_offsets(const std::vector<BroadcastRecord>& records,
                                                         const std::vector<TruthRow>& truth,
                                                         const RunConfig& config) {
  RunConfig cfg = config;
  cfg.mode = SyncMode::Prior;  // samples only, no models
  const RunReport rep = run(cfg, records, truth);
  std::map<int, std::vector<OffsetSample>> out;
  for (const auto& [id, d] : rep.sync) out[id] = d.samples;
  return out;
}

RunReport run(const RunConfig& config, const std::vector<BroadcastRecord>& records,
              const std::vector<TruthRow>& truth) {
  return Runner(config, records, truth).run();
}

}  // namespace avtrack::pipeline
