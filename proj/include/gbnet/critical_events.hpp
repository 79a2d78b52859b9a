#pragma once

#include <string>
#include <vector>

#include "gbnet/energy.hpp"
#include "gbnet/network.hpp"

namespace gbnet {

struct EventThresholds {
    double delta_l;  // boundary-disappearance length
    double delta_a;  // grain-disappearance area
    double delta_j;  // junction-pair distance

    static EventThresholds from_target_h(double target_h) {
        const double dl = 0.5 * target_h;
        return {dl, dl * dl, dl};
    }
};

enum class EventKind { NeighborSwitch, RemoveGrain };

struct CriticalEvent {
    EventKind kind;
    int grain = -1;     // RemoveGrain
    int boundary = -1;  // NeighborSwitch
    double severity = 0.0;
};

struct EventRecord {
    double time;
    std::string kind;
    std::vector<int> grain_ids;
    std::vector<int> boundary_ids;
    double delta_e;
};

using EventLog = std::vector<EventRecord>;

// Events ordered by severity class: boundaries shorter than delta_l,
// then grains below the area threshold (or with fewer than 3 sides),
// then junction pairs closer than delta_j.
std::vector<CriticalEvent> detect_events(const GrainNetwork& net, const EventThresholds& th);

// Apply surgeries in order, revalidating each event against the current
// network (stale events are skipped).  A surgery that leaves a grain with
// fewer than 3 sides cascades into that grain's removal within the call.
EventLog apply_events(const EnergyModel& model, GrainNetwork& net,
                      const std::vector<CriticalEvent>& events, const EventThresholds& th);

}  // namespace gbnet
