#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "adasketch/bench.hpp"

namespace adasketch::bench {

std::vector<Aggregate> aggregate(const std::vector<RunRecord>& records) {
  std::vector<Aggregate> out;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> index;
  for (const RunRecord& r : records) {
    const auto key = std::make_tuple(r.problem_id, r.method_id, r.group);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      Aggregate a;
      a.problem_id = r.problem_id;
      a.method_id = r.method_id;
      a.group = r.group;
      a.solved = true;
      out.push_back(std::move(a));
    }
    Aggregate& a = out[it->second];
    a.members.push_back(&r);
    a.solved = a.solved && r.converged();
  }
  for (Aggregate& a : out) {
    a.runs = a.members.size();
    const auto n = static_cast<double>(a.runs);
    for (const RunRecord* r : a.members) {
      a.final_kkt += r->final_kkt;
      a.obj_cons_evals += static_cast<double>(r->obj_cons_evals);
      a.grad_jac_evals += static_cast<double>(r->grad_jac_evals);
      a.total_flops += static_cast<double>(r->total_flops);
      a.wall_time += r->wall_time;
    }
    a.final_kkt /= n;
    a.obj_cons_evals /= n;
    a.grad_jac_evals /= n;
    a.total_flops /= n;
    a.wall_time /= n;
  }
  return out;
}

ProfileResult performance_profile(const std::vector<RunRecord>& records) {
  const auto aggs = aggregate(records);
  std::vector<std::string> problems;
  std::vector<std::string> methods;
  std::map<std::pair<std::string, std::string>, const Aggregate*> cell;
  for (const Aggregate& a : aggs) {
    if (!cell.emplace(std::make_pair(a.problem_id, a.method_id), &a).second)
      throw InvalidArgument("performance_profile: (" + a.problem_id + ", " + a.method_id +
                            ") appears in more than one group");
    if (std::find(problems.begin(), problems.end(), a.problem_id) == problems.end()) problems.push_back(a.problem_id);
    if (std::find(methods.begin(), methods.end(), a.method_id) == methods.end()) methods.push_back(a.method_id);
  }

  ProfileResult result;
  const double inf = std::numeric_limits<double>::infinity();
  std::map<std::string, std::vector<double>> ratios;  // per method, one per kept problem
  for (const std::string& p : problems) {
    double best = inf;
    for (const std::string& m : methods) {
      const auto it = cell.find({p, m});
      if (it != cell.end() && it->second->solved) best = std::min(best, it->second->total_flops);
    }
    if (best == inf) {
      result.warnings.push_back("problem '" + p + "' dropped: no method converged");
      continue;
    }
    for (const std::string& m : methods) {
      const auto it = cell.find({p, m});
      double ratio = inf;
      if (it != cell.end() && it->second->solved)
        ratio = best > 0.0 ? it->second->total_flops / best : 1.0;
      ratios[m].push_back(ratio);
    }
  }

  std::set<double> taus{1.0};
  for (const auto& [_, rs] : ratios)
    for (double r : rs)
      if (std::isfinite(r)) taus.insert(r);

  for (const std::string& m : methods) {
    ProfileCurve curve;
    curve.method_id = m;
    const auto& rs = ratios[m];
    for (double tau : taus) {
      double rho = 0.0;
      if (!rs.empty()) {
        const auto hits = std::count_if(rs.begin(), rs.end(), [&](double r) { return r <= tau; });
        rho = static_cast<double>(hits) / static_cast<double>(rs.size());
      }
      curve.points.push_back({tau, rho});
    }
    result.curves.push_back(std::move(curve));
  }
  return result;
}

namespace {

// Linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::nan("");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::vector<BoxSummary> summarize_groups(const std::vector<RunRecord>& records) {
  const auto aggs = aggregate(records);
  std::vector<std::string> groups;
  for (const Aggregate& a : aggs)
    if (std::find(groups.begin(), groups.end(), a.group) == groups.end()) groups.push_back(a.group);

  struct Metric {
    const char* name;
    double Aggregate::*field;
  };
  const Metric metrics[] = {{"final_kkt", &Aggregate::final_kkt},
                            {"obj_cons_evals", &Aggregate::obj_cons_evals},
                            {"grad_jac_evals", &Aggregate::grad_jac_evals},
                            {"total_flops", &Aggregate::total_flops}};
  std::vector<BoxSummary> out;
  for (const std::string& g : groups) {
    for (const Metric& metric : metrics) {
      std::vector<double> values;
      for (const Aggregate& a : aggs)
        if (a.group == g) values.push_back(a.*metric.field);
      std::sort(values.begin(), values.end());
      BoxSummary row;
      row.group = g;
      row.metric = metric.name;
      row.count = values.size();
      row.min = values.front();
      row.q1 = quantile(values, 0.25);
      row.median = quantile(values, 0.5);
      row.q3 = quantile(values, 0.75);
      row.max = values.back();
      out.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace adasketch::bench
