#include "olsrsim/energy_estimation.hpp"

#include <algorithm>
#include <cmath>

namespace olsrsim {

std::optional<double> PerceivedEnergyRepo::rate_from(std::span<const EnergyReport> reports) {
  if (reports.size() < 2) return std::nullopt;
  const auto& prev = reports[reports.size() - 2];
  const auto& last = reports.back();
  const double dt = to_seconds(last.reported_at - prev.reported_at);
  // Energy going up means a retransmit or clock artifact; treat as no drain.
  return std::max(0.0, (prev.energy - last.energy) / dt);
}

bool PerceivedEnergyRepo::record_report(const EnergyReport& r) {
  auto& s = subjects_[r.subject];
  if (!s.reports.empty() && r.reported_at <= s.reports.back().reported_at) return false;
  s.reports.push_back(r);
  if (s.reports.size() > kHistoryDepth) s.reports.erase(s.reports.begin());
  s.rate = rate_from(s.reports);
  ++version_;
  return true;
}

void PerceivedEnergyRepo::mark_unreachable(NodeId subject) {
  if (subjects_.erase(subject) > 0) ++version_;
}

std::optional<double> PerceivedEnergyRepo::rate(NodeId subject) const {
  auto it = subjects_.find(subject);
  if (it == subjects_.end()) return std::nullopt;
  return it->second.rate;
}

const EnergyReport* PerceivedEnergyRepo::latest(NodeId subject) const {
  auto it = subjects_.find(subject);
  if (it == subjects_.end() || it->second.reports.empty()) return nullptr;
  return &it->second.reports.back();
}

std::span<const EnergyReport> PerceivedEnergyRepo::history(NodeId subject) const {
  auto it = subjects_.find(subject);
  if (it == subjects_.end()) return {};
  return it->second.reports;
}

std::optional<double> PerceivedEnergyRepo::mean_rate_excluding(NodeId subject) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [id, s] : subjects_) {
    if (id == subject || !s.rate) continue;
    sum += *s.rate;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

void PerceivedEnergyRepo::record_own(SimTime at, Energy residual) {
  if (!own_.empty() && at <= own_.back().reported_at) return;
  own_.push_back({owner_, residual.as_joules(), at, at});
  if (own_.size() > 2) own_.erase(own_.begin());
}

std::optional<double> PerceivedEnergyRepo::own_rate() const { return rate_from(own_); }

std::vector<NodeId> PerceivedEnergyRepo::subjects() const {
  std::vector<NodeId> out;
  out.reserve(subjects_.size());
  for (const auto& [id, s] : subjects_) {
    if (!s.reports.empty()) out.push_back(id);
  }
  return out;
}

std::optional<Perception> perceive(const PerceivedEnergyRepo& repo, NodeId subject, SimTime now,
                                   EstimationMode mode, std::optional<double> ground_truth,
                                   std::optional<double> own_rate) {
  if (mode == EstimationMode::Ideal) {
    if (!ground_truth) return std::nullopt;
    return Perception{std::max(0.0, *ground_truth), false};
  }

  const EnergyReport* last = repo.latest(subject);
  if (last == nullptr) return std::nullopt;

  std::optional<double> rate;
  if (mode == EstimationMode::Prediction) {
    rate = repo.rate(subject);
  } else if (mode == EstimationMode::SmartPrediction) {
    rate = repo.rate(subject);
    if (!rate) rate = repo.mean_rate_excluding(subject);
    if (!rate) rate = own_rate;
  }

  if (!rate) return Perception{last->energy, false};
  const double elapsed = to_seconds(now - last->reported_at);
  return Perception{std::max(0.0, last->energy - *rate * elapsed), true};
}

std::vector<InaccuracySample> inaccuracy_snapshot(std::span<const PerceivedEnergyRepo* const> repos,
                                                  std::span<const Energy> actual,
                                                  std::span<const std::uint8_t> alive, SimTime now,
                                                  EstimationMode mode, Energy initial) {
  std::vector<InaccuracySample> out;
  const double scale = initial.as_joules();
  for (std::size_t o = 0; o < repos.size(); ++o) {
    if (!alive[o] || repos[o] == nullptr) continue;
    const auto& repo = *repos[o];
    const auto own = repo.own_rate();
    for (NodeId subject : repo.subjects()) {
      const auto s = index(subject);
      if (s == o || s >= actual.size() || !alive[s]) continue;
      const double truth = actual[s].as_joules();
      auto p = perceive(repo, subject, now, mode, truth, own);
      if (!p) continue;
      out.push_back({NodeId{static_cast<std::uint32_t>(o)}, subject, now, p->joules, truth,
                     std::abs(p->joules - truth) / scale, p->adjusted});
    }
  }
  return out;
}

double mean_error(std::span<const InaccuracySample> samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : samples) sum += s.error;
  return sum / static_cast<double>(samples.size());
}

}  // namespace olsrsim
