//! Synthetic instances and route corpora.
//!
//! Routes respect pairing, precedence and capacity, and stations are only
//! placed where the vehicle is empty. Time windows are deliberately not
//! enforced, so a corpus mixes feasible and infeasible routes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ingest::corpus::CorpusRecord;
use crate::ingest::instance::{derive_dropoff_windows, BatterySpec, Instance, InstanceNode, Station};
use crate::model::RouteSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bias {
    /// Uniformly random requests and interleaving.
    Random,
    /// Requests picked up along a simulated vehicle walk that always takes
    /// the reachable stop able to start earliest, with a few random moves.
    GreedyNearest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub routes_per_instance: usize,
    /// Inclusive bounds on the node count, depots and stations included.
    pub size_range: (usize, usize),
    /// Chance of a station at each slot where the vehicle is empty.
    pub station_density: f64,
    pub bias: Bias,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 1,
            routes_per_instance: 1000,
            size_range: (4, 40),
            station_density: 0.0,
            bias: Bias::GreedyNearest,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("generated {produced} of {wanted} routes before the retry budget ran out")]
pub struct GenerationExhausted {
    pub produced: usize,
    pub wanted: usize,
}

/// Corpus records for `inst`, a deterministic function of the instance and
/// `cfg.seed`.
pub fn generate_records(inst: &Instance, cfg: &GenConfig) -> Result<Vec<CorpusRecord>, GenerationExhausted> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let wanted = cfg.routes_per_instance;
    let budget = 1000 + 50 * wanted;
    let mut out = Vec::with_capacity(wanted);
    let stations: Vec<usize> = if cfg.station_density > 0.0 {
        inst.stations().iter().map(|s| s.id).collect()
    } else {
        Vec::new()
    };
    let (lo, hi) = cfg.size_range;
    let max_k = inst.requests.min(hi.saturating_sub(2) / 2);
    let min_k = if stations.is_empty() {
        lo.saturating_sub(2).div_ceil(2).max(1)
    } else {
        1
    };

    for _ in 0..budget {
        if out.len() == wanted {
            break;
        }
        if min_k > max_k {
            break;
        }
        let k = rng.gen_range(min_k..=max_k);
        let events = match cfg.bias {
            Bias::Random => {
                let requests: Vec<usize> = rand::seq::index::sample(&mut rng, inst.requests, k)
                    .into_iter()
                    .map(|i| i + 1)
                    .collect();
                random_interleaving(inst, &requests, &mut rng)
            }
            Bias::GreedyNearest => {
                let noise = *[0.0, 0.02, 0.1].choose(&mut rng).expect("non-empty");
                vehicle_walk(inst, k, noise, &mut rng)
            }
        };
        let Some(events) = events else { continue };
        let mut ids = vec![inst.origin_id()];
        ids.extend(events);
        ids.push(inst.destination_id());
        if !stations.is_empty() {
            ids = insert_stations(inst, ids, &stations, cfg.station_density, hi, &mut rng);
        }
        if ids.len() < lo || ids.len() > hi {
            continue;
        }
        out.push(CorpusRecord {
            instance_id: inst.name.clone(),
            vehicle_id: out.len() % inst.vehicles.max(1),
            node_ids: ids,
        });
    }
    if out.len() < wanted {
        return Err(GenerationExhausted {
            produced: out.len(),
            wanted,
        });
    }
    Ok(out)
}

/// Same as [`generate_records`], resolved into routes.
pub fn generate(inst: &Instance, cfg: &GenConfig) -> Result<Vec<RouteSequence>, GenerationExhausted> {
    Ok(generate_records(inst, cfg)?
        .iter()
        .map(|r| inst.route_from_ids(&r.node_ids).expect("generated ids exist"))
        .collect())
}

fn load(inst: &Instance, id: usize) -> i32 {
    inst.nodes[id].load
}

fn random_interleaving(inst: &Instance, requests: &[usize], rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let mut pending = requests.to_vec();
    let mut onboard: Vec<usize> = Vec::new();
    let mut carried = 0;
    let mut out = Vec::with_capacity(2 * requests.len());
    while !pending.is_empty() || !onboard.is_empty() {
        let can_pick: Vec<usize> = (0..pending.len())
            .filter(|&i| carried + load(inst, pending[i]) <= inst.capacity)
            .collect();
        let options = can_pick.len() + onboard.len();
        if options == 0 {
            return None;
        }
        let pick = rng.gen_range(0..options);
        if pick < can_pick.len() {
            let p = pending.swap_remove(can_pick[pick]);
            carried += load(inst, p);
            onboard.push(p);
            out.push(p);
        } else {
            let p = onboard.swap_remove(pick - can_pick.len());
            carried -= load(inst, p);
            out.push(inst.dropoff_of(p));
        }
    }
    Some(out)
}

// Simulates a vehicle leaving the depot: at each step it takes the stop that
// can start earliest among those still reachable within their window and,
// for dropoffs, the ride limit. Requests are picked up on the fly until `k`
// have boarded or the vehicle is empty with nothing left in reach. With
// probability `noise` per step the move is random instead, and a loaded
// vehicle with nothing reachable takes the earliest stop anyway, so the
// result may be infeasible.
fn vehicle_walk(inst: &Instance, k: usize, noise: f64, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let first = rng.gen_range(1..=inst.requests);
    let mut used = vec![false; inst.requests + 1];
    let mut onboard: Vec<(usize, f64)> = Vec::new(); // (pickup, departure after service)
    let mut boarded = 0;
    let mut carried = 0;
    let mut at = inst.origin_id();
    let mut clock = (inst.nodes[first].open - inst.travel(at, first)).max(inst.nodes[at].open);
    let mut out = Vec::with_capacity(2 * k);
    while boarded < k || !onboard.is_empty() {
        let start = |id: usize| (clock + inst.travel(at, id)).max(inst.nodes[id].open);
        // (node id, is pickup, reachable)
        let mut options: Vec<(usize, bool, bool)> = Vec::new();
        for &(p, left) in &onboard {
            let d = inst.dropoff_of(p);
            let t = start(d);
            options.push((d, false, t <= inst.nodes[d].close && t - left <= inst.max_ride));
        }
        if boarded < k {
            let candidates = if boarded == 0 { first..=first } else { 1..=inst.requests };
            for p in candidates {
                if used[p] || carried + load(inst, p) > inst.capacity {
                    continue;
                }
                let t = start(p);
                let d = inst.dropoff_of(p);
                let reach = t + inst.nodes[p].service + inst.travel(p, d);
                options.push((p, true, t <= inst.nodes[p].close && reach <= inst.nodes[d].close));
            }
        }
        if options.is_empty() {
            return None;
        }
        if onboard.is_empty() && boarded > 0 && !options.iter().any(|o| o.2) {
            break;
        }
        // a reachable move is safe when the dropoffs still owed can all be
        // served afterwards in order of their deadlines
        let safe = |&(id, is_pickup, ok): &(usize, bool, bool)| {
            if !ok {
                return false;
            }
            let mut t = start(id) + inst.nodes[id].service;
            let mut owed: Vec<(usize, f64)> = onboard
                .iter()
                .filter(|&&(q, _)| is_pickup || inst.dropoff_of(q) != id)
                .map(|&(q, left)| {
                    let d = inst.dropoff_of(q);
                    (d, inst.nodes[d].close.min(left + inst.max_ride))
                })
                .collect();
            if is_pickup {
                let d = inst.dropoff_of(id);
                owed.push((d, inst.nodes[d].close.min(t + inst.max_ride)));
            }
            owed.sort_by(|a, b| a.1.total_cmp(&b.1));
            let mut here = id;
            owed.iter().all(|&(d, deadline)| {
                let arrive = (t + inst.travel(here, d)).max(inst.nodes[d].open);
                t = arrive + inst.nodes[d].service;
                here = d;
                arrive <= deadline
            })
        };
        let choice = if rng.gen_bool(noise) {
            *options.choose(rng).expect("non-empty")
        } else {
            let tier = |o: &(usize, bool, bool)| if safe(o) { 0 } else if o.2 { 1 } else { 2 };
            let best = options.iter().map(tier).min().expect("non-empty");
            if best > 0 && onboard.is_empty() && boarded > 0 {
                break;
            }
            *options
                .iter()
                .filter(|o| tier(o) == best)
                .min_by(|a, b| start(a.0).total_cmp(&start(b.0)))
                .expect("non-empty")
        };
        let (id, is_pickup, _) = choice;
        clock = start(id) + inst.nodes[id].service;
        at = id;
        if is_pickup {
            used[id] = true;
            boarded += 1;
            carried += load(inst, id);
            onboard.push((id, clock));
        } else {
            let idx = onboard
                .iter()
                .position(|&(q, _)| inst.dropoff_of(q) == id)
                .expect("dropoff of an onboard request");
            let (q, _) = onboard.swap_remove(idx);
            carried -= load(inst, q);
        }
        out.push(id);
    }
    Some(out)
}

fn insert_stations(
    inst: &Instance,
    ids: Vec<usize>,
    stations: &[usize],
    density: f64,
    max_size: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let mut out = Vec::with_capacity(ids.len() + 4);
    let mut carried = 0;
    let last = ids.len() - 1;
    for (pos, &id) in ids.iter().enumerate() {
        out.push(id);
        if id != inst.origin_id() && id != inst.destination_id() {
            carried += inst.nodes[id].load;
        }
        if pos < last && carried == 0 && out.len() + (last - pos) < max_size && rng.gen_bool(density) {
            out.push(*stations.choose(rng).expect("stations available"));
        }
    }
    out
}

/// Parameters of a synthetic instance in the style of the classic
/// benchmark: coordinates in `[-10, 10]^2`, unit loads, a window on one end
/// of each request.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub name: String,
    pub requests: usize,
    pub vehicles: usize,
    pub capacity: i32,
    pub max_ride: f64,
    pub service: f64,
    pub horizon: f64,
    /// Window starts are drawn from `[60, active_until]`.
    pub active_until: f64,
    pub window_width: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(name: &str, requests: usize, seed: u64) -> Self {
        SyntheticSpec {
            name: name.to_string(),
            requests,
            vehicles: (requests / 8).max(1),
            capacity: 6,
            max_ride: 90.0,
            service: 3.0,
            horizon: 1440.0,
            active_until: 600.0,
            window_width: 15.0,
            seed,
        }
    }
}

pub fn synthetic_darp(spec: &SyntheticSpec) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.requests;
    let depot = |id| InstanceNode {
        id,
        x: 0.0,
        y: 0.0,
        service: 0.0,
        load: 0,
        open: 0.0,
        close: spec.horizon,
    };
    let mut nodes = vec![depot(0)];
    let coords = |rng: &mut ChaCha8Rng| (rng.gen_range(-10.0..=10.0), rng.gen_range(-10.0..=10.0));
    let mut pickups = Vec::new();
    let mut dropoffs = Vec::new();
    for i in 1..=n {
        let (px, py) = coords(&mut rng);
        let (dx, dy) = coords(&mut rng);
        let t0: f64 = rng.gen_range(60.0..=spec.active_until);
        let window = (t0, t0 + spec.window_width);
        let open = (0.0, spec.horizon);
        let outbound = i <= n / 2;
        let (pw, dw) = if outbound { (window, open) } else { (open, window) };
        let node = |id, x, y, load, (o, c): (f64, f64)| InstanceNode {
            id,
            x,
            y,
            service: spec.service,
            load,
            open: o,
            close: c,
        };
        pickups.push(node(i, px, py, 1, pw));
        dropoffs.push(node(i + n, dx, dy, -1, dw));
    }
    nodes.extend(pickups);
    nodes.extend(dropoffs);
    nodes.push(depot(2 * n + 1));
    let inst = Instance {
        name: spec.name.clone(),
        vehicles: spec.vehicles,
        requests: n,
        max_route_duration: spec.horizon,
        capacity: spec.capacity,
        max_ride: spec.max_ride,
        nodes,
        battery: None,
    };
    derive_dropoff_windows(&inst)
}

/// Battery settings of a synthetic electric instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticBattery {
    pub stations: usize,
    pub capacity: f64,
    pub end_ratio: f64,
    pub initial: f64,
    pub discharge: f64,
    pub charge_rate: f64,
}

impl SyntheticBattery {
    pub fn new(stations: usize, end_ratio: f64) -> Self {
        SyntheticBattery {
            stations,
            capacity: 14.85,
            end_ratio,
            initial: 14.85,
            discharge: 0.055,
            charge_rate: 0.11,
        }
    }
}

pub fn synthetic_eadarp(spec: &SyntheticSpec, battery: &SyntheticBattery) -> Instance {
    let mut inst = synthetic_darp(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x5eed_0000_0000_0001);
    let first = inst.nodes.len();
    let stations = (0..battery.stations)
        .map(|k| Station {
            id: first + k,
            x: rng.gen_range(-10.0..=10.0),
            y: rng.gen_range(-10.0..=10.0),
            alpha: battery.charge_rate,
        })
        .collect();
    inst.battery = Some(BatterySpec {
        capacity: battery.capacity,
        end_ratio: battery.end_ratio,
        initial: battery.initial,
        discharge: battery.discharge,
        stations,
    });
    inst
}
