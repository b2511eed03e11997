//! Benchmark instance files.
//!
//! ```text
//! m n T Q L                       vehicles, requests, route duration, capacity, max ride
//! id x y service load open close  one line per node: depot, pickups, dropoffs, end depot
//! Q r B_init beta                 (e-ADARP only) battery block
//! id x y alpha                    (e-ADARP only) one line per charging station
//! ```
//!
//! Files that give `2n` instead of `n` in the header, or that omit the end
//! depot line, are accepted as well; the node count decides.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::battery::BatteryParams;
use crate::model::{validate_structure, Node, RouteError, RouteSequence, Violation, EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Darp,
    Eadarp,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "darp" => Ok(Format::Darp),
            "eadarp" => Ok(Format::Eadarp),
            other => Err(format!("unknown instance format `{other}`")),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("malformed line {0}")]
    MalformedLine(usize),
    #[error("{0}")]
    CountMismatch(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceNode {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub service: f64,
    pub load: i32,
    pub open: f64,
    pub close: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Station {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatterySpec {
    pub capacity: f64,
    pub end_ratio: f64,
    pub initial: f64,
    pub discharge: f64,
    pub stations: Vec<Station>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub vehicles: usize,
    pub requests: usize,
    pub max_route_duration: f64,
    pub capacity: i32,
    pub max_ride: f64,
    /// Indexed by id: `0`, pickups `1..=n`, dropoffs `n+1..=2n`, end depot `2n+1`.
    pub nodes: Vec<InstanceNode>,
    pub battery: Option<BatterySpec>,
}

#[derive(Debug, Error, PartialEq)]
pub enum RouteBuildError {
    #[error("unknown node id {0}")]
    UnknownNode(usize),
    #[error(transparent)]
    Route(#[from] RouteError),
    #[error("invalid route: {0}")]
    Structure(Violation),
}

impl Instance {
    pub fn origin_id(&self) -> usize {
        0
    }

    pub fn destination_id(&self) -> usize {
        2 * self.requests + 1
    }

    pub fn dropoff_of(&self, pickup: usize) -> usize {
        pickup + self.requests
    }

    pub fn is_pickup(&self, id: usize) -> bool {
        (1..=self.requests).contains(&id)
    }

    pub fn stations(&self) -> &[Station] {
        self.battery.as_ref().map(|b| b.stations.as_slice()).unwrap_or(&[])
    }

    pub fn horizon(&self) -> (f64, f64) {
        (self.nodes[0].open, self.nodes[0].close)
    }

    fn point(&self, id: usize) -> Option<(f64, f64)> {
        if let Some(n) = self.nodes.get(id) {
            return Some((n.x, n.y));
        }
        self.stations().iter().find(|s| s.id == id).map(|s| (s.x, s.y))
    }

    /// Euclidean travel time between two node ids. Panics on unknown ids.
    pub fn travel(&self, a: usize, b: usize) -> f64 {
        let (ax, ay) = self.point(a).expect("known node id");
        let (bx, by) = self.point(b).expect("known node id");
        (ax - bx).hypot(ay - by)
    }

    pub fn battery_params(&self) -> Option<BatteryParams> {
        self.battery.as_ref().map(|b| BatteryParams {
            capacity: b.capacity,
            initial: b.initial,
            end_ratio: b.end_ratio,
            discharge: b.discharge,
            charge_rates: b.stations.iter().map(|s| (s.id, s.alpha)).collect(),
            default_charge_rate: b.stations.first().map(|s| s.alpha).unwrap_or(1.0),
        })
    }

    /// Builds the route visiting `ids` in order, with Euclidean travel times.
    pub fn route_from_ids(&self, ids: &[usize]) -> Result<RouteSequence, RouteBuildError> {
        let n = self.requests;
        let (h_open, h_close) = self.horizon();
        let mut nodes = Vec::with_capacity(ids.len());
        let mut direct = BTreeMap::new();
        for &id in ids {
            if self.point(id).is_none() {
                return Err(RouteBuildError::UnknownNode(id));
            }
            let node = if id == 0 {
                Node::origin_depot(id, self.nodes[0].open, self.nodes[0].close)
            } else if id == self.destination_id() {
                let d = &self.nodes[id];
                Node::destination_depot(id, d.open, d.close).with_service(d.service)
            } else if id <= n {
                let p = &self.nodes[id];
                direct.insert(id, self.travel(id, id + n));
                Node::pickup(id, id + n, p.load, p.service, (p.open, p.close), self.max_ride)
            } else if id <= 2 * n {
                let d = &self.nodes[id];
                Node::dropoff(id, id - n, -d.load, d.service, (d.open, d.close))
            } else {
                Node::station(id, h_open, h_close)
            };
            nodes.push(node);
        }
        let legs = ids.windows(2).map(|w| self.travel(w[0], w[1])).collect();
        let route = RouteSequence::new(nodes, legs, direct, self.capacity)?;
        match validate_structure(&route).into_iter().next() {
            Some(v) => Err(RouteBuildError::Structure(v)),
            None => Ok(route),
        }
    }
}

fn fields(line: &str, no: usize) -> Result<Vec<f64>, ParseError> {
    line.split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| ParseError::MalformedLine(no)))
        .collect()
}

fn as_index(v: f64, no: usize) -> Result<usize, ParseError> {
    if v >= 0.0 && v.fract() == 0.0 {
        Ok(v as usize)
    } else {
        Err(ParseError::MalformedLine(no))
    }
}

pub fn parse_instance(text: &str, format: Format) -> Result<Instance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (no, header) = lines.next().ok_or(ParseError::MalformedLine(1))?;
    let h = fields(header, no)?;
    if h.len() != 5 {
        return Err(ParseError::MalformedLine(no));
    }

    let mut nodes = Vec::new();
    let mut battery_line: Option<(usize, Vec<f64>)> = None;
    let mut stations = Vec::new();
    for (no, line) in lines {
        let f = fields(line, no)?;
        match (f.len(), &battery_line) {
            (7, None) if stations.is_empty() => {
                let id = as_index(f[0], no)?;
                if id != nodes.len() || f[4].fract() != 0.0 {
                    return Err(ParseError::MalformedLine(no));
                }
                nodes.push(InstanceNode {
                    id,
                    x: f[1],
                    y: f[2],
                    service: f[3],
                    load: f[4] as i32,
                    open: f[5],
                    close: f[6],
                });
            }
            (4, None) if format == Format::Eadarp => battery_line = Some((no, f)),
            (4, Some(_)) => stations.push(Station {
                id: as_index(f[0], no)?,
                x: f[1],
                y: f[2],
                alpha: f[3],
            }),
            _ => return Err(ParseError::MalformedLine(no)),
        }
    }

    let declared = as_index(h[1], no)?;
    let k = nodes.len();
    let requests = if k == 2 * declared + 2 || k == 2 * declared + 1 {
        declared
    } else if declared % 2 == 0 && (k == declared + 2 || k == declared + 1) {
        declared / 2
    } else {
        return Err(ParseError::CountMismatch(format!(
            "header announces {declared} requests but {k} node lines follow"
        )));
    };
    if k == 2 * requests + 1 {
        let mut end = nodes[0].clone();
        end.id = k;
        nodes.push(end);
    }
    for i in 1..=requests {
        if nodes[i].load <= 0 || nodes[i + requests].load != -nodes[i].load {
            return Err(ParseError::CountMismatch(format!(
                "request {i} has unmatched pickup and dropoff loads"
            )));
        }
    }

    let battery = match (format, battery_line) {
        (Format::Darp, _) => None,
        (Format::Eadarp, None) => {
            return Err(ParseError::CountMismatch("battery block missing".into()));
        }
        (Format::Eadarp, Some((bno, b))) => {
            let spec = BatterySpec {
                capacity: b[0],
                end_ratio: b[1],
                initial: b[2],
                discharge: b[3],
                stations,
            };
            let ok = (0.0..=1.0).contains(&spec.end_ratio)
                && spec.initial <= spec.capacity
                && spec.initial >= 0.0
                && spec.discharge > 0.0
                && spec.stations.iter().all(|s| s.alpha > 0.0 && s.id >= nodes.len());
            if !ok {
                return Err(ParseError::MalformedLine(bno));
            }
            Some(spec)
        }
    };

    Ok(Instance {
        name: String::new(),
        vehicles: as_index(h[0], no)?,
        requests,
        max_route_duration: h[2],
        capacity: h[3] as i32,
        max_ride: h[4],
        nodes,
        battery,
    })
}

/// Reads an instance file; the instance is named after the file stem.
pub fn load_instance(path: &Path, format: Format) -> anyhow::Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    let mut inst = parse_instance(&text, format)?;
    inst.name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(inst)
}

/// Writes `inst` back in the canonical layout.
pub fn render_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {} {} {}",
        inst.vehicles, inst.requests, inst.max_route_duration, inst.capacity, inst.max_ride
    );
    for n in &inst.nodes {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {}",
            n.id, n.x, n.y, n.service, n.load, n.open, n.close
        );
    }
    if let Some(b) = &inst.battery {
        let _ = writeln!(out, "{} {} {} {}", b.capacity, b.end_ratio, b.initial, b.discharge);
        for s in &b.stations {
            let _ = writeln!(out, "{} {} {} {}", s.id, s.x, s.y, s.alpha);
        }
    }
    out
}

/// Dropoff window implied by a pickup window, its service, the direct travel
/// and the maximum ride time.
pub fn derived_dropoff_window(open: f64, close: f64, service: f64, direct: f64, max_ride: f64) -> (f64, f64) {
    (open + service + direct, close + service + max_ride)
}

/// Pickup window implied by a dropoff window.
pub fn derived_pickup_window(open: f64, close: f64, service: f64, direct: f64, max_ride: f64) -> (f64, f64) {
    (open - max_ride - service, close - direct - service)
}

/// Fills in the window of whichever end of a request only carries the
/// planning horizon, intersected with the horizon.
pub fn derive_dropoff_windows(inst: &Instance) -> Instance {
    let mut out = inst.clone();
    let (h0, h1) = inst.horizon();
    let unset = |n: &InstanceNode| n.open <= h0 + EPS && n.close >= h1 - EPS;
    let clip = |(a, b): (f64, f64)| (a.max(h0), b.min(h1));
    for p in 1..=inst.requests {
        let d = inst.dropoff_of(p);
        let (pn, dn) = (&inst.nodes[p], &inst.nodes[d]);
        let direct = inst.travel(p, d);
        if !unset(pn) && unset(dn) {
            let (a, b) = clip(derived_dropoff_window(pn.open, pn.close, pn.service, direct, inst.max_ride));
            out.nodes[d].open = a;
            out.nodes[d].close = b;
        } else if unset(pn) && !unset(dn) {
            let (a, b) = clip(derived_pickup_window(dn.open, dn.close, pn.service, direct, inst.max_ride));
            out.nodes[p].open = a;
            out.nodes[p].close = b;
        }
    }
    out
}
