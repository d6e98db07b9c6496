use std::fs;
use std::path::Path;

use fab_core::degree_growth::{degree_sequence, DEFAULT_CEILING};
use fab_core::map_core::{ChartPoint, Params};
use fab_core::measure_lab::{
    basin_escape, count_vs_formula, disk_coords, empirical_measure, find_saddle, grid, manifold, pairing_report,
    trace_manifold, write_curves_csv, Branch, ManifoldConfig, ManifoldTrace, TraceConfig, Tracer,
};
use fab_core::picard;
use fab_core::real_dynamics::arcs::{default_rows, TypeTable};
use fab_core::real_dynamics::regions::region_of_params;
use fab_core::real_dynamics::{arc_counts, calibrate, canonical_arcs, e_intervals, ArcType, Flavor};
use fab_core::scalar::parse_rational;
use fab_core::symbolic::{self, code_orbit, count_admissible, parry_measure, Word};
use fab_core::Error;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::checks;
use crate::config::RunConfig;
use crate::json;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file or parameters: exit code 2.
    Config(String),
    /// A computation failed: exit code 1.
    Run(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ParseRational(_) | Error::InvalidParams(_) | Error::BadSymbol(_) | Error::MemoryGuard { .. } => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Run(e.to_string()),
        }
    }
}

type Res<T> = Result<T, CliError>;

fn io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Run(format!("{}: {e}", path.display()))
}

pub struct Ctx {
    pub cfg: RunConfig,
    pub params: Params,
    pub hash: String,
}

impl Ctx {
    pub fn new(cfg: RunConfig) -> Res<Self> {
        let params = Params::parse(&cfg.a, &cfg.b)?;
        if !(cfg.window.0 < cfg.window.1) || cfg.eps_spacing <= 0.0 || cfg.residual <= 0.0 {
            return Err(CliError::Config("window must be increasing and tolerances positive".into()));
        }
        let hash = cfg.hash();
        Ok(Ctx { cfg, params, hash })
    }

    fn envelope(&self, command: &str, result: Value) -> Value {
        json!({
            "command": command,
            "config_hash": self.hash,
            "params": { "a": self.params.a.to_string(), "b": self.params.b.to_string() },
            "result": result,
        })
    }

    fn emit(&self, command: &str, result: Value) {
        print!("{}", json::to_string(&self.envelope(command, result)));
    }

    fn trace_cfg(&self) -> TraceConfig {
        TraceConfig { eps: self.cfg.eps_spacing, ..TraceConfig::default() }
    }

    fn needs_b(&self, what: &str) -> Res<()> {
        if self.params.b_f64() == 0.0 {
            return Err(CliError::Config(format!("{what} requires b ≠ 0")));
        }
        Ok(())
    }

    pub fn verify(&self) -> Res<bool> {
        let checks = checks::verify(&self.params, &self.cfg);
        let ok = checks::all_pass(&checks);
        for c in &checks {
            log::info!("{:>22} {:?} {}", c.name, c.status, c.detail);
        }
        self.emit("verify", json!({ "pass": ok, "checks": checks }));
        Ok(ok)
    }

    fn degrees_value(&self, n: usize) -> Value {
        let seq = degree_sequence(&self.params, n, DEFAULT_CEILING);
        let records: Vec<Value> = seq
            .records
            .iter()
            .map(|r| json!({ "n": r.n, "degree": r.degree, "predicted": r.predicted as i64, "ratio": r.ratio }))
            .collect();
        json!({
            "records": records,
            "first_drop": seq.first_drop,
            "truncated": seq.truncated,
            "ceiling": seq.ceiling,
            "generic": self.params.generic,
            "prediction_applies": self.params.generic && self.params.b_f64() != 0.0,
            "witness": self.params.witness,
            "rho": picard::dynamical_degree(),
        })
    }

    pub fn degrees(&self, n: Option<usize>) -> Res<bool> {
        let n = n.unwrap_or(self.cfg.n_degrees);
        if n > DEFAULT_CEILING {
            return Err(CliError::Config(format!("n = {n} exceeds the exact ceiling {DEFAULT_CEILING}")));
        }
        self.emit("degrees", self.degrees_value(n));
        Ok(true)
    }

    fn spectrum_value(&self) -> Value {
        let nu = parry_measure();
        json!({
            "rho": picard::dynamical_degree(),
            "entropy": symbolic::entropy(),
            "charpoly_pullback": picard::charpoly(&picard::pullback_matrix()),
            "charpoly_restricted": picard::charpoly(&picard::restricted_action()),
            "charpoly_transition": picard::charpoly(&symbolic::F),
            "pullback_matrix": picard::pullback_matrix(),
            "intersection_form": picard::intersection_form(),
            "restricted_action": picard::restricted_action(),
            "pairing_matrix": picard::s_pairing_matrix(),
            "transition_matrix": symbolic::F,
            "parry": { "left": nu.left, "right": nu.right, "stationary": nu.stationary(), "entropy": nu.entropy() },
        })
    }

    pub fn spectrum(&self) -> Res<bool> {
        self.emit("spectrum", self.spectrum_value());
        Ok(true)
    }

    pub fn classify(&self, x: &str, y: &str) -> Res<bool> {
        let (x, y) = (parse_rational(x)?, parse_rational(y)?);
        let p = ChartPoint::<BigRational>::affine(x, y);
        let plus = region_of_params(&p, &self.params, picard::Side::Plus);
        let minus = region_of_params(&p, &self.params, picard::Side::Minus);
        let (rho, theta) = disk_coords(&p, self.params.b_f64());
        self.emit(
            "regions classify",
            json!({ "plus": plus.to_string(), "minus": minus.to_string(), "disk": [rho, theta] }),
        );
        Ok(true)
    }

    fn table_value(&self, grid: usize) -> Res<(Value, bool)> {
        self.needs_b("the region model")?;
        let c = calibrate(&self.params, grid, self.cfg.samples)?;
        let ok = c.ok();
        Ok((serde_json::to_value(&c).expect("calibration serializes"), ok))
    }

    pub fn table(&self, grid: usize) -> Res<bool> {
        let (v, ok) = self.table_value(grid)?;
        self.emit("regions table", json!({ "ok": ok, "calibration": v }));
        Ok(ok)
    }

    fn intervals_value(&self) -> Value {
        let e = e_intervals(&self.params);
        json!({
            "intervals": e.intervals.iter().map(|i| json!({
                "name": i.to_string(), "curve": i.curve.to_string(), "flavor": i.flavor.to_string(),
                "lo": i.lo.as_ref().map_or("-inf".into(), |q| q.to_string()),
                "hi": i.hi.as_ref().map_or("inf".into(), |q| q.to_string()),
            })).collect::<Vec<_>>(),
            "disjoint": e.disjoint(),
            "overlaps": e.overlaps,
            "standard": e.standard,
        })
    }

    pub fn intervals(&self) -> Res<bool> {
        self.emit("regions intervals", self.intervals_value());
        Ok(true)
    }

    pub fn pullback(&self, arc_type: &str, n: u32, csv: Option<&Path>) -> Res<bool> {
        self.needs_b("arc tracing")?;
        let t = ArcType::parse(arc_type)?;
        let canon = canonical_arcs(&self.params)?;
        let c = canon
            .iter()
            .find(|c| c.arc_type == t)
            .ok_or_else(|| CliError::Run(format!("no canonical arc of type {t}")))?;
        let steps = if t.flavor == Flavor::S { -(n as i32) } else { n as i32 };
        let tracer = Tracer::new(&self.params, self.trace_cfg());
        let curve = tracer.iterate_curve(&c.source, steps)?;
        let counts = arc_counts(&curve, &TypeTable::new(&self.params, default_rows()));
        let mut fnm: [[i64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| (i == j) as i64));
        for _ in 0..n {
            fnm = picard::mat_mul(&fnm, &symbolic::F);
        }
        let j = (t.index - 1) as usize;
        let required: [i64; 4] = std::array::from_fn(|i| fnm[i][j]);
        let got = if t.flavor == Flavor::S { counts.svec } else { counts.uvec };
        let ok = got.iter().zip(&required).all(|(&g, &r)| g as i64 >= r);
        if let Some(path) = csv {
            let f = fs::File::create(path).map_err(|e| io(path, e))?;
            let name = format!("{t}^{steps}");
            write_curves_csv(f, &[(&name, &curve)], self.params.b_f64())?;
        }
        self.emit(
            "arcs pullback",
            json!({
                "type": t.to_string(), "iterate": steps, "svec": counts.svec, "uvec": counts.uvec,
                "required": required, "dominates": ok, "vertices": curve.stats.vertices, "length": curve.length(),
            }),
        );
        Ok(ok)
    }

    pub fn pairing(&self, text: bool) -> Res<bool> {
        self.needs_b("the intersection oracle")?;
        let r = pairing_report(&self.params, &self.trace_cfg())?;
        if text {
            print!("{}", r.render());
        } else {
            let mut v = serde_json::to_value(&r).expect("report serializes");
            v["text"] = Value::String(r.render());
            self.emit("arcs pairing", v);
        }
        Ok(r.undisputed_agree)
    }

    pub fn code(&self, x: &str, y: &str, k: usize) -> Res<bool> {
        let p = ChartPoint::<BigRational>::affine(parse_rational(x)?, parse_rational(y)?).to_dd();
        let v = match code_orbit(&p, &self.params, k) {
            Ok(w) => json!({ "k": k, "word": w.to_string(), "coded": true }),
            Err(f) => json!({ "k": k, "coded": false, "failure": f, "reason": f.to_string() }),
        };
        self.emit("code", v);
        Ok(true)
    }

    pub fn nu(&self, word: &str) -> Res<bool> {
        let w = Word::parse(word)?;
        let nu = parry_measure();
        self.emit(
            "sft nu",
            json!({ "word": w.to_string(), "admissible": symbolic::is_admissible(&w), "nu": nu.nu(&w) }),
        );
        Ok(true)
    }

    pub fn entropy(&self) -> Res<bool> {
        let nu = parry_measure();
        self.emit(
            "sft entropy",
            json!({ "entropy": nu.entropy(), "log_rho": symbolic::entropy(), "rho": nu.rho }),
        );
        Ok(true)
    }

    pub fn count(&self, len: usize, first: Option<&str>, last: Option<&str>) -> Res<bool> {
        let pins = |s: Option<&str>| -> Res<Option<Vec<u8>>> {
            s.map(|s| Word::parse(s).map(|w| w.symbols().to_vec()).map_err(CliError::from)).transpose()
        };
        let (f, l) = (pins(first)?, pins(last)?);
        let c = count_admissible(len, f.as_deref(), l.as_deref());
        self.emit("sft count", json!({ "len": len, "first": first, "last": last, "count": c.to_string() }));
        Ok(true)
    }

    fn intersections_value(&self, n: usize, s: f64, t: f64) -> Res<(Value, bool)> {
        self.needs_b("the intersection count")?;
        if !(0.0 < s && s < 1.0 && t > 0.0) {
            return Err(CliError::Config("need 0 < s < 1 and t > 0".into()));
        }
        let r = count_vs_formula(n, &self.params, s, t, &self.trace_cfg())?;
        let mut v = serde_json::to_value(&r).expect("report serializes");
        v["points"] = serde_json::to_value(&r.set.points).expect("points serialize");
        v["status"] = Value::String(
            if r.ok() {
                "pass"
            } else if r.consistent() {
                "discrepancy"
            } else {
                "fail"
            }
            .into(),
        );
        Ok((v, r.ok() || r.consistent()))
    }

    pub fn intersections(&self, n: usize, s: f64, t: f64) -> Res<bool> {
        let (v, ok) = self.intersections_value(n, s, t)?;
        self.emit("intersections", v);
        Ok(ok)
    }

    fn measure_value(&self, n: usize, depth: usize, k: usize) -> Res<Value> {
        self.needs_b("the empirical measure")?;
        if depth == 0 || depth > n + 1 {
            return Err(CliError::Config(format!("depth must lie in 1..={}", n + 1)));
        }
        let (lo, hi) = self.cfg.window;
        let g = grid(k, lo, hi);
        let m = empirical_measure(n, &g, &g, &self.params, &self.trace_cfg())?;
        let cmp = m.compare(depth);
        Ok(json!({
            "n": n, "depth": depth, "grid": k, "window": [lo, hi],
            "total_mass": m.total_mass(), "supported_in_regions": m.supported_in_regions(),
            "atoms": m.atoms.len(), "uncoded": m.uncoded, "pairs": m.pairs, "comparison": cmp,
        }))
    }

    pub fn measure(&self, n: usize, depth: usize, k: Option<usize>) -> Res<bool> {
        let v = self.measure_value(n, depth, k.unwrap_or(self.cfg.grid))?;
        self.emit("measure compare", v);
        Ok(true)
    }

    fn traces(&self, stable: bool, unstable: bool, budget: Option<f64>, iterates: usize) -> Res<Vec<ManifoldTrace>> {
        self.needs_b("manifold tracing")?;
        let saddle = find_saddle(&self.params)?;
        let cfg = ManifoldConfig { iterates, budget, ..ManifoldConfig::default() };
        let mut out = Vec::new();
        if unstable {
            out.push(trace_manifold(&saddle, Branch::Unstable, &self.params, &cfg)?);
        }
        if stable {
            out.push(trace_manifold(&saddle, Branch::Stable, &self.params, &cfg)?);
        }
        Ok(out)
    }

    fn traces_value(traces: &[ManifoldTrace]) -> Value {
        Value::Array(
            traces
                .iter()
                .map(|t| {
                    let mut v = serde_json::to_value(t).expect("trace serializes");
                    v["growth"] = serde_json::to_value(t.growth(5..=9)).expect("growth serializes");
                    v
                })
                .collect(),
        )
    }

    fn write_figures(&self, traces: &[ManifoldTrace], svg: Option<&Path>, csv: Option<&Path>) -> Res<()> {
        let refs: Vec<&ManifoldTrace> = traces.iter().collect();
        if let Some(p) = svg {
            fs::write(p, manifold::svg(&refs, 800.0)).map_err(|e| io(p, e))?;
        }
        if let Some(p) = csv {
            let f = fs::File::create(p).map_err(|e| io(p, e))?;
            manifold::write_csv(f, &refs, self.params.b_f64())?;
        }
        Ok(())
    }

    pub fn manifold(
        &self,
        stable: bool,
        unstable: bool,
        budget: Option<f64>,
        iterates: usize,
        svg: Option<&Path>,
        csv: Option<&Path>,
    ) -> Res<bool> {
        let traces = self.traces(stable, unstable, budget, iterates)?;
        self.write_figures(&traces, svg, csv)?;
        self.emit("manifold", json!({ "traces": Self::traces_value(&traces) }));
        Ok(true)
    }

    pub fn basin(&self, x: &str, y: &str, maxiter: usize) -> Res<bool> {
        let p = ChartPoint::<BigRational>::affine(parse_rational(x)?, parse_rational(y)?).to_dd();
        let r = basin_escape(&p, &self.params, maxiter);
        self.emit("basin", serde_json::to_value(r).expect("report serializes"));
        Ok(true)
    }

    pub fn report_all(&self) -> Res<bool> {
        let dir = &self.cfg.out_dir;
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let mut ok = true;
        let write = |name: &str, command: &str, v: Res<Value>| -> bool {
            let path = dir.join(name);
            let (v, good) = match v {
                Ok(v) => (v, true),
                Err(CliError::Config(m) | CliError::Run(m)) => {
                    eprintln!("fab: {name}: {m}");
                    (json!({ "error": m }), false)
                }
            };
            match fs::write(&path, json::to_string(&self.envelope(command, v))) {
                Ok(()) => good,
                Err(e) => {
                    eprintln!("fab: {}: {e}", path.display());
                    false
                }
            }
        };
        ok &= write("config.json", "config", Ok(serde_json::to_value(&self.cfg).expect("config serializes")));
        ok &= write("degrees.json", "degrees", Ok(self.degrees_value(self.cfg.n_degrees.min(DEFAULT_CEILING))));
        ok &= write("spectrum.json", "spectrum", Ok(self.spectrum_value()));
        let regions = self.table_value(120).map(|(t, ok)| json!({ "ok": ok, "calibration": t }));
        let regions = match regions {
            Err(CliError::Config(m)) => Ok(json!({ "skipped": m })),
            r => r,
        }
        .map(|mut v| {
            v["intervals"] = self.intervals_value();
            v
        });
        ok &= write("regions.json", "regions", regions);
        let inter = (1..=self.cfg.n_intersections)
            .map(|n| self.intersections_value(n, 0.3, 0.7).map(|(v, _)| v))
            .collect::<Res<Vec<_>>>()
            .map(Value::Array);
        ok &= write("intersections.json", "intersections", inter);
        ok &= write("measure.json", "measure compare", self.measure_value(3, 1, self.cfg.grid));
        match self.traces(true, true, Some(self.cfg.arclength), 24) {
            Ok(traces) => {
                let svg = dir.join("fig01.svg");
                let csv = dir.join("manifold.csv");
                if let Err(CliError::Config(m) | CliError::Run(m)) = self.write_figures(&traces, Some(&svg), Some(&csv)) {
                    eprintln!("fab: figures: {m}");
                    ok = false;
                }
                ok &= write("manifold.json", "manifold", Ok(json!({ "traces": Self::traces_value(&traces) })));
            }
            Err(e) => ok &= write("manifold.json", "manifold", Err(e)),
        }
        Ok(ok)
    }
}
