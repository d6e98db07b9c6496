use log::info;
use num_rational::BigRational;
use serde::Serialize;

use super::map::{Direction, FamilyMap, DEFAULT_NEAR_RADIUS};
use super::params::Params;
use super::point::{Chart, ChartPoint, PointStatus};
use crate::dd::Dd;
use crate::scalar::bit_size;

pub const DEFAULT_BIT_CAP: u64 = 4096;

#[derive(Clone, Copy, Debug)]
pub struct OrbitConfig {
    /// Largest numerator/denominator size kept exact.
    pub bit_cap: u64,
    pub near_radius: f64,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig { bit_cap: DEFAULT_BIT_CAP, near_radius: DEFAULT_NEAR_RADIUS }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OrbitPoint {
    Exact(ChartPoint<BigRational>),
    Approx(ChartPoint<Dd>),
}

impl OrbitPoint {
    pub fn chart(&self) -> Chart {
        match self {
            OrbitPoint::Exact(p) => p.chart(),
            OrbitPoint::Approx(p) => p.chart(),
        }
    }

    pub fn to_dd(&self) -> ChartPoint<Dd> {
        match self {
            OrbitPoint::Exact(p) => p.to_dd(),
            OrbitPoint::Approx(p) => *p,
        }
    }

    fn coord_strings(&self) -> (String, String) {
        match self {
            OrbitPoint::Exact(p) => {
                let (c1, c2) = p.coords();
                (c1.to_string(), c2.map(|c| c.to_string()).unwrap_or_default())
            }
            OrbitPoint::Approx(p) => {
                let (c1, c2) = p.coords();
                let f = |d: Dd| format!("{:.17e}", d.to_f64());
                (f(c1), c2.map(f).unwrap_or_default())
            }
        }
    }
}

impl Copy for ChartPoint<Dd> {}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitEntry {
    pub index: i64,
    pub point: OrbitPoint,
    pub status: PointStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum OrbitEvent {
    ChartSwitch { index: i64, from: Chart, to: Chart },
    Downgrade { index: i64, bits: u64 },
    Halt { index: i64, direction: Direction },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    /// Sorted by index.
    pub entries: Vec<OrbitEntry>,
    pub events: Vec<OrbitEvent>,
}

impl Orbit {
    pub fn entry(&self, index: i64) -> Option<&OrbitEntry> {
        self.entries.iter().find(|e| e.index == index)
    }

    /// CSV with columns index, chart, coord1, coord2, status.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["index", "chart", "coord1", "coord2", "status"]).expect("in-memory write");
        for e in &self.entries {
            let (c1, c2) = e.point.coord_strings();
            w.write_record([e.index.to_string(), e.point.chart().to_string(), c1, c2, e.status.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
    }
}

fn too_big(p: &ChartPoint<BigRational>, cap: u64) -> Option<u64> {
    let (c1, c2) = p.coords();
    let bits = bit_size(&c1).max(c2.as_ref().map(bit_size).unwrap_or(0));
    (bits > cap).then_some(bits)
}

struct Stepper {
    exact: FamilyMap<BigRational>,
    float: FamilyMap<Dd>,
    cfg: OrbitConfig,
}

impl Stepper {
    fn status(&self, p: &OrbitPoint) -> PointStatus {
        match p {
            OrbitPoint::Exact(q) => self.exact.classify(q),
            OrbitPoint::Approx(q) => self.float.classify(q),
        }
    }

    fn step(&self, p: &OrbitPoint, dir: Direction) -> Result<OrbitPoint, PointStatus> {
        match p {
            OrbitPoint::Exact(q) => self.exact.apply(q, dir).map(OrbitPoint::Exact),
            OrbitPoint::Approx(q) => self.float.apply(q, dir).map(OrbitPoint::Approx),
        }
    }

    fn run(&self, start: &OrbitPoint, dir: Direction, n: usize, entries: &mut Vec<OrbitEntry>, events: &mut Vec<OrbitEvent>) {
        let sign = if dir.is_forward() { 1 } else { -1 };
        let mut cur = start.clone();
        for k in 1..=n as i64 {
            let next = match self.step(&cur, dir) {
                Ok(q) => q,
                Err(_) => {
                    events.push(OrbitEvent::Halt { index: sign * (k - 1), direction: dir });
                    return;
                }
            };
            let index = sign * k;
            let next = match next {
                OrbitPoint::Exact(q) => match too_big(&q, self.cfg.bit_cap) {
                    Some(bits) => {
                        info!("orbit index {index}: {bits}-bit coordinates, switching to double-double");
                        events.push(OrbitEvent::Downgrade { index, bits });
                        OrbitPoint::Approx(q.to_dd())
                    }
                    None => OrbitPoint::Exact(q),
                },
                q => q,
            };
            if next.chart() != cur.chart() {
                events.push(OrbitEvent::ChartSwitch { index, from: cur.chart(), to: next.chart() });
            }
            entries.push(OrbitEntry { index, status: self.status(&next), point: next.clone() });
            cur = next;
        }
    }
}

/// Iterates `n_back` steps of f⁻¹ and `n_fwd` steps of f from `p`. A direction
/// halts at the first point where its map is indeterminate.
pub fn orbit(p: &ChartPoint<BigRational>, params: &Params, n_back: usize, n_fwd: usize, cfg: OrbitConfig) -> Orbit {
    let st = Stepper {
        exact: FamilyMap::new(params),
        float: FamilyMap::new(params).with_near_radius(cfg.near_radius),
        cfg,
    };
    let start = OrbitPoint::Exact(p.clone());
    let mut entries = vec![OrbitEntry { index: 0, status: st.status(&start), point: start.clone() }];
    let mut events = Vec::new();
    st.run(&start, Direction::Forward, n_fwd, &mut entries, &mut events);
    st.run(&start, Direction::Backward, n_back, &mut entries, &mut events);
    entries.sort_by_key(|e| e.index);
    events.sort_by_key(|e| match e {
        OrbitEvent::ChartSwitch { index, .. } | OrbitEvent::Downgrade { index, .. } | OrbitEvent::Halt { index, .. } => *index,
    });
    Orbit { entries, events }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map_core::point::{Incidence, VCurve};
    use crate::scalar::rat;

    #[test]
    fn origin_halts_forward_immediately() {
        let p = Params::from_ints(-2, 1);
        let o = orbit(&ChartPoint::affine(rat(0, 1), rat(0, 1)), &p, 0, 5, OrbitConfig::default());
        assert_eq!(o.entries.len(), 1);
        assert!(o.entries[0].status.contains(Incidence::IndeterminateForward));
        assert_eq!(o.events, vec![OrbitEvent::Halt { index: 0, direction: Direction::Forward }]);
    }

    #[test]
    fn v2_alternates() {
        let p = Params::from_ints(-2, 1);
        let o = orbit(&ChartPoint::on(VCurve::V2, rat(1, 3)), &p, 0, 6, OrbitConfig::default());
        for e in &o.entries {
            let want = if e.index % 2 == 0 { rat(1, 3) } else { rat(2, 3) };
            assert_eq!(e.point, OrbitPoint::Exact(ChartPoint::on(VCurve::V2, want)));
        }
    }

    #[test]
    fn v4_translates() {
        let p = Params::from_ints(-2, 1);
        let o = orbit(&ChartPoint::on(VCurve::V4, rat(0, 1)), &p, 0, 3, OrbitConfig::default());
        let ts: Vec<_> = o
            .entries
            .iter()
            .map(|e| match &e.point {
                OrbitPoint::Exact(ChartPoint::On { curve, t }) => (*curve, t.clone()),
                _ => panic!(),
            })
            .collect();
        assert_eq!(
            ts,
            vec![
                (VCurve::V4, rat(0, 1)),
                (VCurve::V5, rat(-2, 1)),
                (VCurve::V4, rat(-3, 1)),
                (VCurve::V5, rat(-5, 1)),
            ]
        );
        assert_eq!(o.events.len(), 3);
    }

    #[test]
    fn growth_triggers_downgrade() {
        let p = Params::from_ints(-2, 1);
        let cfg = OrbitConfig { bit_cap: 64, ..Default::default() };
        let o = orbit(&ChartPoint::affine(rat(2, 7), rat(3, 5)), &p, 0, 40, cfg);
        assert!(o.events.iter().any(|e| matches!(e, OrbitEvent::Downgrade { .. })));
        assert!(o.entries.iter().any(|e| matches!(e.point, OrbitPoint::Approx(_))));
        let csv = o.to_csv();
        assert!(csv.starts_with("index,chart,coord1,coord2,status\n0,Affine,2/7,3/5,Regular\n"));
    }
}
