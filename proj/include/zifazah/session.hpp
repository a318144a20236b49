#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zifazah/ast.hpp"
#include "zifazah/diagnostic.hpp"
#include "zifazah/encoding.hpp"
#include "zifazah/fiber_model.hpp"
#include "zifazah/zfz_format.hpp"

namespace zifazah {

/// Sorted, duplicate-free fiber ids.
using FiberSet = std::vector<int>;

struct ModelHandle {
  std::string source;
  bool operator==(const ModelHandle&) const = default;
};

using Value = std::variant<FiberSet, double, ModelHandle>;

/// Focus map from scope key (bundle tag, variable name, "OUT ..." or "ALL")
/// to the fibers focused through that scope. A SELECT replaces its own keys
/// and keeps the others.
struct SelectionState {
  std::map<std::string, FiberSet> focus;

  static SelectionState everything(std::size_t fiber_count) {
    SelectionState s;
    FiberSet all(fiber_count);
    for (std::size_t i = 0; i < fiber_count; ++i) all[i] = static_cast<int>(i);
    s.focus["ALL"] = std::move(all);
    return s;
  }

  std::vector<char> focused_mask(std::size_t fiber_count) const {
    std::vector<char> mask(fiber_count, 0);
    for (const auto& [key, ids] : focus)
      for (int id : ids) mask[static_cast<std::size_t>(id)] = 1;
    return mask;
  }

  bool operator==(const SelectionState&) const = default;
};

struct PlaneSetting {
  double position = 0;
  bool enabled = false;
  bool operator==(const PlaneSetting&) const = default;
};

/// Cutting planes indexed by axis (x sagittal, y coronal, z axial). Each
/// plane keeps the half-space of greater-or-equal coordinate.
struct PlaneState {
  std::array<PlaneSetting, 3> axis{};

  static PlaneState initial(const Box& bounds) {
    PlaneState p;
    for (int a = 0; a < 3; ++a) p.axis[static_cast<std::size_t>(a)] = {bounds.min[a], false};
    return p;
  }

  PlaneSetting& of(Plane plane) { return axis[static_cast<std::size_t>(plane_axis(plane))]; }
  const PlaneSetting& of(Plane plane) const { return axis[static_cast<std::size_t>(plane_axis(plane))]; }

  bool culls(const Vec3& centroid) const {
    for (int a = 0; a < 3; ++a) {
      const auto& p = axis[static_cast<std::size_t>(a)];
      if (p.enabled && centroid[a] < p.position) return true;
    }
    return false;
  }

  bool operator==(const PlaneState&) const = default;
};

enum class EntryKind { Fatal, Warning, Notice, Result };

inline std::string_view to_string(EntryKind k) {
  switch (k) {
    case EntryKind::Fatal: return "fatal";
    case EntryKind::Warning: return "warning";
    case EntryKind::Notice: return "notice";
    case EntryKind::Result: return "result";
  }
  return "";
}

inline EntryKind entry_kind(Level l) {
  return l == Level::Fatal ? EntryKind::Fatal : l == Level::Warning ? EntryKind::Warning : EntryKind::Notice;
}

struct LogEntry {
  std::uint64_t seq = 0;
  EntryKind kind = EntryKind::Notice;
  std::string message;
  int line = 0;
  int column = 0;
  std::optional<std::string> name;  // result entries only
  std::optional<double> value;
};

/// Resolves a LOAD path to a model. Throws Error when the path is refused or
/// invalid; may append warnings.
using ModelLoader =
    std::function<std::shared_ptr<const FiberModel>(const std::string& path, std::vector<Diagnostic>& warnings)>;

inline ModelLoader filesystem_loader() {
  return [](const std::string& path, std::vector<Diagnostic>& warnings) {
    auto loaded = load_model_file(path);
    for (auto& w : loaded.diagnostics) warnings.push_back(std::move(w));
    return std::make_shared<const FiberModel>(std::move(loaded.model));
  };
}

/// The interpreter's mutable world.
class Session {
 public:
  Session() : loader(filesystem_loader()) {}
  explicit Session(ModelLoader l) : loader(std::move(l)) {}

  ModelLoader loader;
  std::shared_ptr<const FiberModel> model;
  std::map<std::string, Value> env;
  SelectionState selection;
  PlaneState planes;
  EncodingState encoding;
  std::vector<LogEntry> log;
  std::uint64_t generation = 0;

  bool has_model() const { return model != nullptr; }

  const FiberModel& require_model(int line = 0) const {
    if (!model) throw Error("no model loaded", line);
    return *model;
  }

  /// Makes `m` the active model and resets selection, planes and encodings.
  /// Fiber-set variables refer to the previous model's ids and are dropped.
  void install_model(std::shared_ptr<const FiberModel> m) {
    model = std::move(m);
    centroids_.clear();
    centroids_.reserve(model->size());
    for (const auto& f : model->fibers()) centroids_.push_back(f.centroid());
    std::erase_if(env, [](const auto& kv) { return std::holds_alternative<FiberSet>(kv.second); });
    reset_view_state();
  }

  /// Selection to ALL, planes to initial, encodings to defaults.
  void reset_view_state() {
    if (!model) return;
    selection = SelectionState::everything(model->size());
    planes = PlaneState::initial(model->bounds());
    encoding = EncodingState(model->size());
  }

  const std::vector<Vec3>& centroids() const { return centroids_; }

  std::vector<char> culled_mask() const {
    std::vector<char> mask(centroids_.size(), 0);
    for (std::size_t i = 0; i < centroids_.size(); ++i) mask[i] = planes.culls(centroids_[i]) ? 1 : 0;
    return mask;
  }

  /// Focused and not plane-culled.
  std::vector<char> effective_focus_mask() const {
    if (!model) return {};
    auto mask = selection.focused_mask(model->size());
    const auto culled = culled_mask();
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (culled[i]) mask[i] = 0;
    return mask;
  }

  FiberSet effective_focus() const {
    FiberSet out;
    const auto mask = effective_focus_mask();
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) out.push_back(static_cast<int>(i));
    return out;
  }

  LogEntry& append(EntryKind kind, std::string message, int line = 0, int column = 0) {
    LogEntry e;
    e.seq = next_seq_++;
    e.kind = kind;
    e.message = std::move(message);
    e.line = line;
    e.column = column;
    log.push_back(std::move(e));
    return log.back();
  }
  void append(const Diagnostic& d) { append(entry_kind(d.level), d.message, d.line, d.column); }

  std::uint64_t last_seq() const { return next_seq_ - 1; }

 private:
  std::vector<Vec3> centroids_;
  std::uint64_t next_seq_ = 1;
};

/// Everything that affects the rendered scene, for change detection.
struct VisualState {
  const FiberModel* model = nullptr;
  std::vector<char> focus;
  PlaneState planes;
  EncodingState encoding;
  bool operator==(const VisualState&) const = default;
};

inline VisualState visual_state(const Session& s) {
  return {s.model.get(), s.effective_focus_mask(), s.planes, s.encoding};
}

}  // namespace zifazah
