#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psys/domain.hpp"
#include "psys/measures.hpp"
#include "psys/wave_curves.hpp"

namespace psys {

inline constexpr double kNever = std::numeric_limits<double>::infinity();

enum class SpeedMode { Exact, Prescribed };

struct EngineConfig {
  double delta_rarefaction = 0.05;
  double delta0_shock_threshold = 0.05;
  double lambda_hat = 0.0;  // 0 means: the bound of `domain`
  double tie_tolerance = 1e-12;
  SpeedMode speed_mode = SpeedMode::Exact;
  Domain domain{0.1, 4.0};
  double eps0 = 1.0;
  std::size_t event_cap = 1000000;
  // Prescribed mode: allowed mismatch between planned and exact outgoing
  // states, and whether the planned states replace the exact ones.
  double c1_tolerance = 1e-8;
  bool adopt_planned_states = true;

  void validate() const;
  double speed_bound(const GasParams& g) const;
};

struct Front {
  long id = 0;
  double anchor_x = 0.0;
  double anchor_t = 0.0;
  double speed = 0.0;
  Wave wave;
  double birth_time = 0.0;
  double break_time = kNever;  // scheduled single-front event (compressions)
  std::string tag;

  double position(double t) const { return anchor_x + speed * (t - anchor_t); }
};

struct EngineState {
  double time = 0.0;
  std::vector<Front> fronts;  // ordered by position
  State far_left;
  State far_right;
  InteractionLedger ledger;
  EngineConfig config;
  long next_id = 0;
  double discarded_mass = 0.0;
  std::size_t event_count = 0;
};

enum class EventKind { Collision, Break };

struct Event {
  double time = 0.0;
  double position = 0.0;
  std::vector<long> ids;
  EventKind kind = EventKind::Collision;
};

// Prescribed-mode plan for the outgoing fronts of one event, listed left to
// right.  Each planned front ends at `right`; the last one must end at the
// event's outer right state.
struct PlannedFront {
  int family = 1;
  WaveKind kind = WaveKind::Shock;
  State right;
  double speed = 0.0;
  std::string tag;
  double break_time = kNever;
  // A point the front passes through; the event point when unset.
  double anchor_t = std::numeric_limits<double>::quiet_NaN();
  double anchor_x = std::numeric_limits<double>::quiet_NaN();
};

struct InteractionPlan {
  std::string label;
  NegativeBranch branch1 = NegativeBranch::Shock;
  NegativeBranch branch2 = NegativeBranch::Shock;
  std::vector<PlannedFront> fronts;
};

struct InteractionContext {
  double time = 0.0;
  double position = 0.0;
  EventKind kind = EventKind::Collision;
  std::vector<const Front*> incoming;
  State left;
  State right;
};

class InteractionScript {
 public:
  virtual ~InteractionScript() = default;
  virtual InteractionPlan plan(const InteractionContext& ctx) = 0;
};

struct FrontTrace {
  long id = 0;
  Wave wave;
  double speed = 0.0;
  double anchor_x = 0.0;
  double anchor_t = 0.0;
  double birth = 0.0;
  double death = kNever;
  std::string tag;
};

struct EventRecord {
  std::size_t index = 0;
  double time = 0.0;
  double position = 0.0;
  EventKind kind = EventKind::Collision;
  std::string label;
  std::vector<long> in_ids;
  std::vector<std::string> in_tags;
  std::vector<long> out_ids;
  double interaction_amount = 0.0;
  double c1_residual = 0.0;  // prescribed mode only
};

struct DiagnosticRow {
  std::size_t event_index = 0;
  double time = 0.0;
  std::size_t fronts = 0;
  double V = 0.0;
  double Q = 0.0;
  double Q_pairs = 0.0;
  double functional = 0.0;
  double bv_hu = 0.0;
  double max_shock = 0.0;
  double ledger_total = 0.0;
  double discarded = 0.0;
  double min_h = 0.0;
  int dab_violations = 0;
  int speed_violations = 0;
  bool lemma3_ok = true;
};

struct Snapshot {
  double time = 0.0;
  std::vector<Front> fronts;
  State far_left;
  State far_right;

  Profile profile() const;
  WaveMeasures measures() const;
};

struct History {
  double t_start = 0.0;
  double t_end = 0.0;
  State far_left;
  State far_right;
  std::vector<FrontTrace> fronts;  // indexed by id
  std::vector<EventRecord> events;
  std::vector<DiagnosticRow> diagnostics;  // row 0 is the initial state
  std::vector<Snapshot> snapshots;
};

EngineState init_from_profile(const GasParams& g, const Profile& p, const EngineConfig& cfg,
                              double t0 = 0.0);
std::optional<Event> next_event(const EngineState& s);

class Engine {
 public:
  Engine(GasParams g, EngineState s, std::shared_ptr<InteractionScript> script = nullptr);

  const EngineState& state() const { return s_; }
  const History& history() const { return hist_; }
  const GasParams& gas() const { return g_; }

  std::optional<Event> next_event() const { return psys::next_event(s_); }
  void resolve_interaction(const Event& ev);
  // Processes events up to t_end; snapshots taken at the given times.
  void run_until(double t_end, std::vector<double> snapshot_times = {});

  Snapshot snapshot(double t) const;
  WaveMeasures measures() const;
  DiagnosticRow diagnostics() const;
  double max_c1_residual() const { return max_c1_; }

 private:
  Front make_front(const Wave& w, double speed, double x, double t, std::string tag, double break_time);
  std::vector<Front> exact_outgoing(const RiemannSolution& sol, double x, double t, double* discarded);
  void check_new_front(const Front& f);

  GasParams g_;
  EngineState s_;
  std::shared_ptr<InteractionScript> script_;
  History hist_;
  double max_c1_ = 0.0;
  int dab_violations_ = 0;
  int speed_violations_ = 0;
};

// Splits a rarefaction into ceil(strength/delta) fronts (equal parts, last one
// the remainder).  Other waves are returned unchanged.
std::vector<Wave> split_rarefaction(const GasParams& g, const Wave& w, double delta);

struct DecayReport {
  std::size_t fronts_checked = 0;
  double min_c0 = kNever;
  double max_violation = 0.0;
  bool pass = true;
};

// Discrete decay check on every rarefaction front of the history.
DecayReport check_decay_C2(const GasParams& g, const History& h, double c0_required);

// Backward generalized characteristic of the given family ending at (t, x),
// followed down to t_start.  Points are (t, x), terminal first.
std::vector<std::pair<double, double>> trace_min_characteristic(const GasParams& g, const History& h,
                                                                int family, double t, double x,
                                                                double t_start);

}  // namespace psys
