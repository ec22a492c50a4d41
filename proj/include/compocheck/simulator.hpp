#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "compocheck/diagnostic.hpp"
#include "compocheck/model.hpp"
#include "compocheck/type_system.hpp"

namespace compocheck {

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ComponentInstance {
  std::string id;  // "a", "a.d", "a.d[1]"
  const Class* cls = nullptr;
  std::optional<std::size_t> parent;
  std::size_t holder = 0;
};

struct PortInstance {
  std::string id;  // "a.pIJL", "a.e.rK"
  const Port* port = nullptr;
  std::size_t owner = 0;  // component index
  std::size_t holder = 0;
};

enum class HolderKind { Component, Port };

/// Anything a request can sit at. The position of a holder in
/// InstanceGraph::holders() is its scheduling priority (lower runs first).
struct Holder {
  HolderKind kind = HolderKind::Component;
  std::size_t index = 0;  // into components() or ports()
};

/// One outgoing reference of a holder: requests for `interface` leave over
/// `association` (`deleg_I` for untyped links) toward `target`.
struct DelegBinding {
  std::size_t holder = 0;
  std::string association;
  std::size_t target = 0;
  std::string interface;
  std::string connector;  // "A#2"
};

enum class RequestStatus { InTransit, Delivered, Stuck };

std::string_view to_string(RequestStatus status);

inline constexpr std::size_t kEnvironment = static_cast<std::size_t>(-1);

struct Request {
  int id = 0;
  std::string interface;
  std::string operation;
  std::size_t location = 0;  // holder index, or kEnvironment once delivered outside
  int hops = 0;              // forwarding actions performed by ports
  RequestStatus status = RequestStatus::InTransit;
  std::vector<std::size_t> path;  // holders visited, injection point first
};

struct TraceEvent {
  int step = 0;
  int request = 0;
  std::string from;
  std::string to;
  std::string via;

  bool operator==(const TraceEvent&) const = default;
};

/// Runtime structure of one root class: instances, port instances, the
/// bindings realizing every connector, and the requests in flight.
///
/// The graph owns a copy of the model, so it stays valid independently of
/// the model it was built from. It is not thread-safe.
class InstanceGraph {
 public:
  const Model& model() const { return *model_; }
  const TypeSystem& types() const { return *types_; }
  const std::vector<ComponentInstance>& components() const { return components_; }
  const std::vector<PortInstance>& ports() const { return ports_; }
  const std::vector<Holder>& holders() const { return holders_; }
  const std::vector<DelegBinding>& bindings() const { return bindings_; }
  const std::vector<Request>& requests() const { return requests_; }
  const std::vector<TraceEvent>& events() const { return events_; }
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

  /// Holder id, or "<env>" for kEnvironment.
  std::string holder_id(std::size_t holder) const;
  std::optional<std::size_t> find_holder(std::string_view id) const;

  /// Interfaces a holder can send over its own bindings.
  InterfaceSet outgoing_interfaces(std::size_t holder) const;

 private:
  friend struct GraphAccess;

  std::shared_ptr<const Model> model_;
  std::shared_ptr<const TypeSystem> types_;
  std::vector<ComponentInstance> components_;
  std::vector<PortInstance> ports_;
  std::vector<Holder> holders_;
  std::vector<DelegBinding> bindings_;
  std::vector<Request> requests_;
  std::vector<TraceEvent> events_;
  std::vector<Diagnostic> diagnostics_;
  int steps_ = 0;
};

/// Builds the instance graph of `root`: components for every part (expanded
/// by multiplicity), a port instance per declared port, and bindings for
/// every connector. Throws SimError for an unknown root or a forbidden link.
InstanceGraph instantiate(const Model& model, std::string_view root);

/// Queues a request at a port instance or component instance id. The
/// operation defaults to the interface's first operation. Throws SimError if
/// the location does not accept the interface.
int inject(InstanceGraph& graph, std::string_view location, std::string_view interface_name,
           std::string_view operation = {});

struct StepOutcome {
  bool quiescent = false;
  std::vector<TraceEvent> events;  // several when a request fans out
  std::vector<Diagnostic> diagnostics;
};

/// Performs the single enabled action of highest priority: the request at
/// the lowest-index holder (then lowest id) moves one hop, is delivered, or
/// gets stuck. Throws SimError when a request would revisit a port instance.
StepOutcome step(InstanceGraph& graph);

struct RequestSummary {
  int id = 0;
  std::string interface;
  std::string operation;
  RequestStatus status = RequestStatus::InTransit;
  std::string at;
  std::vector<std::string> path;

  bool operator==(const RequestSummary&) const = default;
};

struct Trace {
  std::vector<TraceEvent> events;
  std::vector<RequestSummary> requests;
  std::vector<Diagnostic> diagnostics;  // R001 no binding, R002 wrong receiver, R003 port rejects
};

Trace run_to_quiescence(InstanceGraph& graph);

struct SafetyReport {
  bool safe = true;
  int delivered = 0;
  int stuck = 0;
  int in_transit = 0;
  std::vector<std::string> violations;
};

/// Every request delivered, and every receiving component provides the
/// request's interface. Deliveries to the environment count as safe.
SafetyReport check_type_safety(const Trace& trace, const InstanceGraph& graph);

struct Injection {
  std::string location;
  std::string interface;
  std::string operation;  // empty: first operation of the interface
};

/// Every provided port of the root crossed with every interface it carries.
std::vector<Injection> default_injections(const InstanceGraph& graph);

/// Every port instance with every interface it carries, plus every component
/// with outgoing bindings with each interface those bindings carry.
std::vector<Injection> full_injections(const InstanceGraph& graph);

struct Simulation {
  Trace trace;
  SafetyReport safety;
};

Simulation simulate(const Model& model, std::string_view root, const std::vector<Injection>& injections);

/// One JSON object per event, then a summary object.
std::string render_trace_json_lines(const Trace& trace, const SafetyReport& safety);
std::string render_trace_text(const Trace& trace, const SafetyReport& safety);

}  // namespace compocheck
