#ifndef DDSIM_TOPOLOGY_HPP
#define DDSIM_TOPOLOGY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ddsim/errors.hpp"
#include "ddsim/rng.hpp"

namespace ddsim {

/**
 * Simplified transit-stub topology: stub domains (endpoint homes) hang off
 * transit domains; every endpoint reaches the victim through exactly one
 * monitored edge router. Routing reduces to endpoint -> edge -> victim;
 * link-level dynamics are out of scope.
 */
struct TopologySpec {
    std::size_t transit_domains = 4;
    std::size_t stub_domains_per_transit = 2;
    std::size_t clients_total = 400;
    std::size_t zombies_total = 50;
    std::size_t edge_routers = 8;
    std::size_t victim_domain = 4;  // 1-based transit index hosting the server

    void validate() const {
        if (transit_domains < 1) throw ConfigError("topology.transit_domains must be >= 1");
        if (stub_domains_per_transit < 1) {
            throw ConfigError("topology.stub_domains_per_transit must be >= 1");
        }
        if (clients_total < 1) throw ConfigError("topology.clients_total must be >= 1");
        if (edge_routers < 1) throw ConfigError("topology.edge_routers must be >= 1");
        if (victim_domain < 1 || victim_domain > transit_domains) {
            throw ConfigError("topology.victim_domain must be in [1, transit_domains]");
        }
    }
};

/// Seeded endpoint placement. client_edge[i] / zombie_edge[k] give the edge
/// router every byte of that endpoint transits.
struct Topology {
    TopologySpec spec;
    std::vector<std::size_t> client_stub;
    std::vector<std::size_t> zombie_stub;
    std::vector<std::size_t> client_edge;
    std::vector<std::size_t> zombie_edge;

    std::size_t stub_count() const {
        return spec.transit_domains * spec.stub_domains_per_transit;
    }
    std::size_t edge_count() const { return spec.edge_routers; }
};

/// Deterministic (seeded) assignment of clients and zombies to stub domains
/// and thence to edge routers. Identical spec and seed give an identical map.
inline Topology build_topology(const TopologySpec& spec, std::uint64_t seed) {
    spec.validate();
    Topology topo;
    topo.spec = spec;

    const std::size_t stubs = topo.stub_count();
    const std::size_t edges = spec.edge_routers;
    Rng rng(stream_seed(seed, 0x7010));

    topo.client_stub.reserve(spec.clients_total);
    topo.client_edge.reserve(spec.clients_total);
    for (std::size_t i = 0; i < spec.clients_total; ++i) {
        const std::size_t stub = rng.uniform_index(stubs);
        topo.client_stub.push_back(stub);
        topo.client_edge.push_back(stub % edges);
    }
    topo.zombie_stub.reserve(spec.zombies_total);
    topo.zombie_edge.reserve(spec.zombies_total);
    for (std::size_t k = 0; k < spec.zombies_total; ++k) {
        const std::size_t stub = rng.uniform_index(stubs);
        topo.zombie_stub.push_back(stub);
        topo.zombie_edge.push_back(stub % edges);
    }
    return topo;
}

}  // namespace ddsim

#endif  // DDSIM_TOPOLOGY_HPP
