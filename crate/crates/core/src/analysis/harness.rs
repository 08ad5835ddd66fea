//! Bound-verification harness: expands a parameter grid into instances,
//! measures exact quantities on each, and compares them with closed-form
//! bounds tagged by theorem anchor.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::{self, BoundKind};
use super::metric::{metric_dimension_exact, MetricDimension};
use super::setsys::{ball_system, trace_system, vc_dimension, Radii, VcDimension};
use crate::error::{Error, Result};
use crate::generators::{
    gen_grid_disk, gen_ktree_subgraph, gen_product, gen_random_plane, grid_td, lb_1planar, lb_treewidth,
    lb_treewidth_simple,
};
use crate::graph::Graph;
use crate::guarding::{
    check_guarding, guarding_product, guarding_td, guarding_wcol, order_from_td, wcol, GuardingFamily,
    ProductCoordinates, TreeDecomposition,
};
use crate::plane::PlaneGraph;
use crate::profiles::{glue_paths, neighborhood_traces, profile_set};

/// Version of the CSV row layout produced by [`csv_rows`].
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    Ktree,
    LbTw,
    LbTwSimple,
    #[serde(rename = "lb-1planar")]
    Lb1planar,
    Grid,
    RandomPlane,
    Product,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Ktree => "ktree",
            GeneratorKind::LbTw => "lb-tw",
            GeneratorKind::LbTwSimple => "lb-tw-simple",
            GeneratorKind::Lb1planar => "lb-1planar",
            GeneratorKind::Grid => "grid",
            GeneratorKind::RandomPlane => "random-plane",
            GeneratorKind::Product => "product",
        }
    }

    fn has_td(self) -> bool {
        matches!(
            self,
            GeneratorKind::Ktree | GeneratorKind::LbTw | GeneratorKind::LbTwSimple | GeneratorKind::Grid
        )
    }

    fn is_plane(self) -> bool {
        matches!(self, GeneratorKind::Grid | GeneratorKind::RandomPlane)
    }

    /// Whether the instance is `K_s`-minor-free for some known `s`: plane
    /// graphs exclude `K_5`, width-`w` graphs exclude `K_{w+2}`.
    fn has_minor_bound(self) -> bool {
        self.has_td() || self.is_plane()
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            GeneratorKind::Ktree => &["t", "n", "a"],
            GeneratorKind::LbTw | GeneratorKind::LbTwSimple => &["t"],
            GeneratorKind::Lb1planar => &[],
            GeneratorKind::Grid | GeneratorKind::RandomPlane => &["w", "h", "a"],
            GeneratorKind::Product => &["t", "n", "p", "c", "a"],
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetMode {
    /// `a` distinct vertices drawn uniformly.
    #[default]
    Random,
    /// `a` vertices evenly spaced along the outer cycle.
    Outer,
}

fn one() -> usize {
    1
}

fn one_f() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

fn metric_cap_default() -> usize {
    5
}

fn metric_max_n_default() -> usize {
    40
}

/// One block of experiments: the Cartesian product of the listed
/// parameter values, each repeated `repeats` times with fresh seeds.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentGroup {
    pub name: String,
    pub generator: GeneratorKind,
    #[serde(default)]
    pub t: Vec<usize>,
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default)]
    pub w: Vec<usize>,
    #[serde(default)]
    pub h: Vec<usize>,
    pub r: Vec<u32>,
    /// Target-set sizes.
    #[serde(default)]
    pub a: Vec<usize>,
    #[serde(default)]
    pub c: Vec<usize>,
    #[serde(default)]
    pub p: Vec<usize>,
    #[serde(default)]
    pub target_mode: TargetMode,
    #[serde(default = "one_f")]
    pub keep: f64,
    #[serde(default = "half")]
    pub diagonal: f64,
    #[serde(default = "one_f")]
    pub density: f64,
    #[serde(default = "one")]
    pub repeats: usize,
    /// Anchor strings of the bounds to evaluate.
    pub bounds: Vec<String>,
    /// Resolving sets are searched up to (excluding) this size.
    #[serde(default = "metric_cap_default")]
    pub metric_cap: usize,
    /// Metric dimension is only computed on graphs with at most this many vertices.
    #[serde(default = "metric_max_n_default")]
    pub metric_max_n: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSpec {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub experiment: Vec<ExperimentGroup>,
}

/// Parameters of one instance. Unused parameters are `None`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InstanceKey {
    pub group: String,
    pub generator: GeneratorKind,
    pub rep: usize,
    pub t: Option<usize>,
    pub n: Option<usize>,
    pub w: Option<usize>,
    pub h: Option<usize>,
    pub a: Option<usize>,
    pub c: Option<usize>,
    pub p: Option<usize>,
    pub r: u32,
    pub seed: u64,
}

impl InstanceKey {
    fn without_r(&self) -> InstanceKey {
        InstanceKey {
            r: 0,
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardStats {
    pub family_size: usize,
    pub max_member: usize,
    pub valid: bool,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Measured {
    pub n: usize,
    pub m: usize,
    pub targets: usize,
    pub diameter: Option<u32>,
    pub profiles: usize,
    /// Distinct `N^r[v] ∩ A`.
    pub traces: usize,
    /// Distinct `N^ρ[v] ∩ A` over every radius `ρ`.
    pub traces_all_radii: Option<usize>,
    pub guarding_td: Option<GuardStats>,
    pub guarding_wcol: Option<GuardStats>,
    pub guarding_product: Option<GuardStats>,
    pub wcol: Option<usize>,
    pub vc: Option<VcDimension>,
    pub vc_outer: Option<VcDimension>,
    pub metric_dimension: Option<MetricDimension>,
}

/// One bound evaluated on one instance. `holds` is `None` when the check is
/// heuristic or could not be decided.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundCheck {
    pub anchor: String,
    pub kind: BoundKind,
    pub quantity: String,
    pub measured: f64,
    pub bound: Option<u128>,
    /// `measured / bound`; for heuristic rows the ratio itself.
    pub ratio: Option<f64>,
    pub holds: Option<bool>,
    pub note: Option<String>,
}

impl BoundCheck {
    fn compare(anchor: &str, kind: BoundKind, quantity: &str, measured: u128, bound: u128) -> Self {
        let holds = match kind {
            BoundKind::Upper => Some(measured <= bound),
            BoundKind::Lower => Some(measured >= bound),
            BoundKind::Heuristic => None,
        };
        BoundCheck {
            anchor: anchor.into(),
            kind,
            quantity: quantity.into(),
            measured: measured as f64,
            bound: Some(bound),
            ratio: (bound > 0).then(|| measured as f64 / bound as f64),
            holds,
            note: None,
        }
    }

    fn undecided(anchor: &str, kind: BoundKind, quantity: &str, measured: f64, note: &str) -> Self {
        BoundCheck {
            anchor: anchor.into(),
            kind,
            quantity: quantity.into(),
            measured,
            bound: None,
            ratio: None,
            holds: None,
            note: Some(note.into()),
        }
    }

    pub fn is_violation(&self) -> bool {
        self.kind != BoundKind::Heuristic && self.holds == Some(false)
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct Timings {
    pub generate_s: f64,
    pub measure_s: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub key: InstanceKey,
    pub measured: Measured,
    pub checks: Vec<BoundCheck>,
    pub timings: Timings,
}

/// Consecutive doubling of `r` within otherwise identical instances, for
/// the heuristic planar ratio.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnvelopeStep {
    pub anchor: String,
    pub key: InstanceKey,
    pub r_from: u32,
    pub r_to: u32,
    pub ratio_from: f64,
    pub ratio_to: f64,
    /// `ratio_to ≤ 2 · ratio_from`; informative only.
    pub within_factor_2: bool,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BenchOutcome {
    pub schema_version: u32,
    pub reports: Vec<ExperimentReport>,
    pub envelope: Vec<EnvelopeStep>,
}

impl BenchOutcome {
    /// Checks of proven bounds that failed.
    pub fn violations(&self) -> impl Iterator<Item = (&InstanceKey, &BoundCheck)> {
        self.reports
            .iter()
            .flat_map(|rep| rep.checks.iter().filter(|c| c.is_violation()).map(move |c| (&rep.key, c)))
    }
}

/// Rejects unknown anchors, anchors that do not apply to the generator,
/// and missing parameters.
pub fn validate_spec(spec: &BenchSpec) -> Result<()> {
    for g in &spec.experiment {
        let kind = g.generator;
        let bad = |msg: String| Err(Error::InvalidArgument(format!("experiment `{}`: {msg}", g.name)));
        if g.r.is_empty() {
            return bad("no radii given".into());
        }
        if g.repeats == 0 {
            return bad("repeats must be positive".into());
        }
        for &p in kind.required() {
            let empty = match p {
                "t" => g.t.is_empty(),
                "n" => g.n.is_empty(),
                "w" => g.w.is_empty(),
                "h" => g.h.is_empty(),
                "a" => g.a.is_empty(),
                "c" => g.c.is_empty(),
                _ => g.p.is_empty(),
            };
            if empty {
                return bad(format!("generator {} needs parameter `{p}`", kind.name()));
            }
        }
        if g.target_mode == TargetMode::Outer && !kind.is_plane() {
            return bad("outer targets need a plane generator".into());
        }
        for anchor in &g.bounds {
            if !bounds::ALL_ANCHORS.contains(&anchor.as_str()) {
                return bad(format!("unknown bound `{anchor}`"));
            }
            let applies = match anchor.as_str() {
                bounds::NC_BOUNDED_TREEWIDTH
                | bounds::GUARDING_BOUNDED_TREEWIDTH
                | bounds::WCOL_BOUNDED_TW
                | bounds::METRIC_DIMENSION => kind.has_td(),
                bounds::NC_PLANAR_DEGREE_16 | bounds::NC_PLANAR_DEGREE_6 | bounds::NC_PLANAR_DEGREE_4 => {
                    kind.is_plane()
                }
                bounds::NC_KT_MINOR_FREE
                | bounds::PROFILES_POLYNOMIAL_IN_A
                | bounds::TRACES_POLYNOMIAL_IN_A
                | bounds::VC_DIM_KT_MINOR_FREE => kind.has_minor_bound(),
                bounds::PROFILES_OUTER_FACE | bounds::VC_DIM_OUTER_FACE => {
                    kind.is_plane() && g.target_mode == TargetMode::Outer
                }
                bounds::GUARDING_PRODUCT => kind == GeneratorKind::Product,
                bounds::CONSTRUCTION_BOUNDED_TREEWIDTH => {
                    matches!(kind, GeneratorKind::LbTw | GeneratorKind::LbTwSimple)
                }
                bounds::CONSTRUCTION_1_PLANAR => kind == GeneratorKind::Lb1planar,
                _ => false,
            };
            if !applies {
                return bad(format!("bound `{anchor}` does not apply to generator {}", kind.name()));
            }
        }
    }
    Ok(())
}

/// SplitMix64 finaliser, used to derive instance seeds.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed derived from everything but `r`, so a radius sweep reuses the
/// same graph.
fn instance_seed(base: u64, group: usize, key: &InstanceKey) -> u64 {
    let fields = [
        group as u64,
        key.rep as u64,
        key.t.map_or(u64::MAX, |x| x as u64),
        key.n.map_or(u64::MAX, |x| x as u64),
        key.w.map_or(u64::MAX, |x| x as u64),
        key.h.map_or(u64::MAX, |x| x as u64),
        key.a.map_or(u64::MAX, |x| x as u64),
        key.c.map_or(u64::MAX, |x| x as u64),
        key.p.map_or(u64::MAX, |x| x as u64),
    ];
    fields.iter().fold(mix(base), |acc, &f| mix(acc ^ f))
}

fn values(v: &[usize]) -> Vec<Option<usize>> {
    if v.is_empty() {
        vec![None]
    } else {
        v.iter().copied().map(Some).collect()
    }
}

/// All instance keys of a [`BenchSpec`], in a fixed order.
pub fn expand(spec: &BenchSpec) -> Result<Vec<(usize, InstanceKey)>> {
    validate_spec(spec)?;
    let mut out = Vec::new();
    for (gi, g) in spec.experiment.iter().enumerate() {
        for rep in 0..g.repeats {
            for t in values(&g.t) {
                for n in values(&g.n) {
                    for w in values(&g.w) {
                        for h in values(&g.h) {
                            for a in values(&g.a) {
                                for c in values(&g.c) {
                                    for p in values(&g.p) {
                                        for &r in &g.r {
                                            let mut key = InstanceKey {
                                                group: g.name.clone(),
                                                generator: g.generator,
                                                rep,
                                                t,
                                                n,
                                                w,
                                                h,
                                                a,
                                                c,
                                                p,
                                                r,
                                                seed: 0,
                                            };
                                            key.seed = instance_seed(spec.seed, gi, &key);
                                            out.push((gi, key));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A generated instance together with whatever structure the bounds need.
struct Instance {
    graph: Graph,
    targets: Vec<usize>,
    td: Option<TreeDecomposition>,
    product: Option<ProductCoordinates>,
    predicted: Option<u128>,
}

fn pick_targets(g: &Graph, plane: Option<&PlaneGraph>, a: usize, mode: TargetMode, seed: u64) -> Result<Vec<usize>> {
    let mut targets = match mode {
        TargetMode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed ^ 0x7A46));
            sample(&mut rng, g.n(), a.min(g.n())).into_vec()
        }
        TargetMode::Outer => {
            let cycle = plane.ok_or_else(|| Error::InvalidArgument("outer targets need an embedding".into()))?.outer_cycle()?;
            let k = a.min(cycle.len());
            (0..k).map(|i| cycle[i * cycle.len() / k]).collect()
        }
    };
    targets.sort_unstable();
    Ok(targets)
}

fn need(x: Option<usize>, name: &str) -> Result<usize> {
    x.ok_or_else(|| Error::InvalidArgument(format!("missing parameter `{name}`")))
}

fn generate(group: &ExperimentGroup, key: &InstanceKey) -> Result<Instance> {
    let seed = key.seed;
    let plain = |graph: Graph, td: Option<TreeDecomposition>, plane: Option<PlaneGraph>| -> Result<Instance> {
        let targets = pick_targets(&graph, plane.as_ref(), need(key.a, "a")?, group.target_mode, seed)?;
        Ok(Instance {
            graph,
            targets,
            td,
            product: None,
            predicted: None,
        })
    };
    match key.generator {
        GeneratorKind::Ktree => {
            let (g, td) = gen_ktree_subgraph(need(key.t, "t")?, need(key.n, "n")?, group.keep, seed)?;
            plain(g, Some(td), None)
        }
        GeneratorKind::Grid => {
            let (w, h) = (need(key.w, "w")?, need(key.h, "h")?);
            let pg = gen_grid_disk(w, h)?;
            plain(pg.graph().clone(), Some(grid_td(w, h)?), Some(pg))
        }
        GeneratorKind::RandomPlane => {
            let pg = gen_random_plane(need(key.w, "w")?, need(key.h, "h")?, group.diagonal, group.keep, seed)?;
            plain(pg.graph().clone(), None, Some(pg))
        }
        GeneratorKind::Product => {
            let (host, td) = gen_ktree_subgraph(need(key.t, "t")?, need(key.n, "n")?, 1.0, seed)?;
            let pc = gen_product(&host, &td, need(key.p, "p")?, need(key.c, "c")?, group.density, mix(seed))?;
            let mut inst = plain(pc.graph.clone(), None, None)?;
            inst.product = Some(pc);
            Ok(inst)
        }
        GeneratorKind::LbTw | GeneratorKind::LbTwSimple | GeneratorKind::Lb1planar => {
            let lb = match key.generator {
                GeneratorKind::LbTw => lb_treewidth(need(key.t, "t")?, key.r)?,
                GeneratorKind::LbTwSimple => lb_treewidth_simple(need(key.t, "t")?, key.r)?,
                _ => lb_1planar(key.r)?,
            };
            Ok(Instance {
                graph: lb.graph,
                targets: lb.targets,
                td: lb.td,
                product: None,
                predicted: Some(lb.predicted_count),
            })
        }
    }
}

fn guard_stats(g: &Graph, targets: &[usize], r: u32, fam: &GuardingFamily) -> Result<GuardStats> {
    Ok(GuardStats {
        family_size: fam.len(),
        max_member: fam.max_member_size(),
        valid: check_guarding(g, targets, r, fam)?.is_valid(),
    })
}

fn validity_check(anchor: &str, quantity: &str, s: GuardStats) -> BoundCheck {
    BoundCheck::compare(anchor, BoundKind::Upper, quantity, u128::from(!s.valid), 0)
}

/// Measures one instance and evaluates every requested bound.
pub fn run_instance(group: &ExperimentGroup, key: &InstanceKey) -> Result<ExperimentReport> {
    let start = Instant::now();
    let inst = generate(group, key)?;
    let generate_s = start.elapsed().as_secs_f64();
    let start = Instant::now();

    let g = &inst.graph;
    let a = &inst.targets;
    let r = key.r;
    let (r64, a64) = (r as u64, a.len() as u64);

    let mut m = Measured {
        n: g.n(),
        m: g.m(),
        targets: a.len(),
        diameter: g.diameter(),
        ..Measured::default()
    };
    if a.is_empty() {
        return Err(Error::EmptyTargets);
    }
    let all: Vec<usize> = (0..g.n()).collect();
    m.profiles = profile_set(g, &all, a, r)?.len();
    m.traces = neighborhood_traces(g, a, r)?.len();
    let profiles = m.profiles as u128;

    // Treewidth and excluded-minor parameters.
    let width = inst.td.as_ref().map(|td| td.width());
    let minor_t = match (width, key.generator.is_plane()) {
        (_, true) => Some(5u64.min(width.map_or(5, |w| w as u64 + 2))),
        (Some(w), false) => Some(w as u64 + 2),
        _ => None,
    };

    let mut checks = Vec::new();
    for anchor in &group.bounds {
        let anchor = anchor.as_str();
        match anchor {
            bounds::NC_BOUNDED_TREEWIDTH => {
                let t = width.expect("validated") as u64;
                checks.push(BoundCheck::compare(
                    anchor,
                    BoundKind::Upper,
                    "profiles",
                    profiles,
                    bounds::nc_bounded_treewidth(t, r64, a64),
                ));
            }
            bounds::NC_PLANAR_DEGREE_16 => checks.push(BoundCheck::compare(
                anchor,
                BoundKind::Upper,
                "profiles",
                profiles,
                bounds::nc_planar_degree_16(r64, a64),
            )),
            bounds::NC_PLANAR_DEGREE_6 => checks.push(BoundCheck::compare(
                anchor,
                BoundKind::Upper,
                "profiles",
                profiles,
                bounds::nc_planar_degree_6(r64, a64),
            )),
            bounds::NC_PLANAR_DEGREE_4 => {
                let ratio = bounds::planar_ratio(m.profiles as u64, r64, a64);
                checks.push(BoundCheck {
                    anchor: anchor.into(),
                    kind: BoundKind::Heuristic,
                    quantity: "profiles/(r^4|A|)".into(),
                    measured: m.profiles as f64,
                    bound: None,
                    ratio,
                    holds: None,
                    note: Some("heuristic evidence; envelope over doubling r".into()),
                });
            }
            bounds::NC_KT_MINOR_FREE => {
                let t = minor_t.expect("validated");
                match bounds::nc_kt_minor_free(t, r64, a64) {
                    Some(b) => checks.push(BoundCheck::compare(anchor, BoundKind::Upper, "profiles", profiles, b)),
                    None => checks.push(BoundCheck::undecided(
                        anchor,
                        BoundKind::Upper,
                        "profiles",
                        profiles as f64,
                        "needs t >= 4",
                    )),
                }
            }
            bounds::PROFILES_POLYNOMIAL_IN_A => {
                let t = minor_t.expect("validated");
                match bounds::profiles_polynomial_in_a(t, r64, a64) {
                    Some(b) => checks.push(BoundCheck::compare(anchor, BoundKind::Upper, "profiles", profiles, b)),
                    None => checks.push(BoundCheck::undecided(
                        anchor,
                        BoundKind::Upper,
                        "profiles",
                        profiles as f64,
                        "needs t >= 3",
                    )),
                }
            }
            bounds::TRACES_POLYNOMIAL_IN_A => {
                let t = minor_t.expect("validated");
                let traces = trace_system(&ball_system(g, &Radii::All), a)?.len();
                m.traces_all_radii = Some(traces);
                match bounds::traces_polynomial_in_a(t, a64) {
                    Some(b) => checks.push(BoundCheck::compare(
                        anchor,
                        BoundKind::Upper,
                        "traces_all_radii",
                        traces as u128,
                        b,
                    )),
                    None => checks.push(BoundCheck::undecided(
                        anchor,
                        BoundKind::Upper,
                        "traces_all_radii",
                        traces as f64,
                        "needs t >= 3 and |A| >= 2",
                    )),
                }
            }
            bounds::PROFILES_OUTER_FACE => checks.push(BoundCheck::compare(
                anchor,
                BoundKind::Upper,
                "profiles",
                profiles,
                bounds::profiles_outer_face(r64, a64),
            )),
            bounds::VC_DIM_KT_MINOR_FREE => {
                let t = minor_t.expect("validated") as usize;
                // A cap of t distinguishes "at most t-1" from a violation.
                let vc = vc_dimension(&ball_system(g, &Radii::All), t.min(8))?;
                m.vc = Some(vc);
                let mut check = BoundCheck::compare(anchor, BoundKind::Upper, "vc_dimension", vc.value() as u128, t as u128 - 1);
                if let VcDimension::AtLeast(_) = vc {
                    check.note = Some(format!("search stopped at {vc}"));
                }
                checks.push(check);
            }
            bounds::VC_DIM_OUTER_FACE => {
                let (glued, a_glued) = glue_paths(g, a, r)?;
                let system = trace_system(&ball_system(&glued, &Radii::All), &a_glued)?;
                let vc = vc_dimension(&system, 4)?;
                m.vc_outer = Some(vc);
                checks.push(BoundCheck::compare(anchor, BoundKind::Upper, "vc_outer_glued", vc.value() as u128, 3));
            }
            bounds::GUARDING_BOUNDED_TREEWIDTH => {
                let td = inst.td.as_ref().expect("validated");
                let fam = guarding_td(g, td, a, r, None)?;
                let t = td.width().max(1) as u64;
                let s = guard_stats(g, a, r, &fam)?;
                m.guarding_td = Some(s);
                checks.push(BoundCheck::compare(
                    anchor,
                    BoundKind::Upper,
                    "guarding_td_family_size",
                    s.family_size as u128,
                    bounds::guarding_td_family(t, r64, a64),
                ));
                checks.push(BoundCheck::compare(
                    anchor,
                    BoundKind::Upper,
                    "guarding_td_member_size",
                    s.max_member as u128,
                    t as u128,
                ));
                checks.push(validity_check(anchor, "guarding_td_unguarded", s));
            }
            bounds::WCOL_BOUNDED_TW => {
                let td = inst.td.as_ref().expect("validated");
                let t = td.width() as u64;
                let ord = order_from_td(g, &td.normalized())?;
                let w = wcol(g, &ord, r);
                m.wcol = Some(w);
                checks.push(BoundCheck::compare(
                    anchor,
                    BoundKind::Upper,
                    "wcol_r",
                    w as u128,
                    bounds::wcol_bounded_tw(t, r64),
                ));
                let fam = guarding_wcol(g, &ord, a, r)?;
                let s = guard_stats(g, a, r, &fam)?;
                m.guarding_wcol = Some(s);
                checks.push(BoundCheck::compare(
                    anchor,
                    BoundKind::Upper,
                    "guarding_wcol_member_size",
                    s.max_member as u128,
                    bounds::wcol_bounded_tw(t, 2 * r64),
                ));
                checks.push(validity_check(anchor, "guarding_wcol_unguarded", s));
            }
            bounds::GUARDING_PRODUCT => {
                let pc = inst.product.as_ref().expect("validated");
                let fam = guarding_product(pc, a, r)?;
                let s = guard_stats(g, a, r, &fam)?;
                m.guarding_product = Some(s);
                let (c, t) = (pc.c as u64, pc.t() as u64);
                checks.push(BoundCheck::compare(
                    anchor,
                    BoundKind::Upper,
                    "guarding_product_member_size",
                    s.max_member as u128,
                    bounds::guarding_product_member(c, t, r64),
                ));
                checks.push(BoundCheck::compare(
                    anchor,
                    BoundKind::Upper,
                    "guarding_product_family_size",
                    s.family_size as u128,
                    bounds::guarding_product_family(t, r64, a64),
                ));
                checks.push(validity_check(anchor, "guarding_product_unguarded", s));
            }
            bounds::CONSTRUCTION_BOUNDED_TREEWIDTH => checks.push(BoundCheck::compare(
                anchor,
                BoundKind::Lower,
                "profiles",
                profiles,
                inst.predicted.expect("lower-bound generator"),
            )),
            bounds::CONSTRUCTION_1_PLANAR => checks.push(BoundCheck::compare(
                anchor,
                BoundKind::Lower,
                "traces",
                m.traces as u128,
                inst.predicted.expect("lower-bound generator"),
            )),
            bounds::METRIC_DIMENSION => {
                let t = width.expect("validated") as u64;
                let n = g.n() as f64;
                if !g.is_connected() {
                    checks.push(BoundCheck::undecided(anchor, BoundKind::Upper, "n", n, "graph is disconnected"));
                } else if g.n() > group.metric_max_n {
                    checks.push(BoundCheck::undecided(anchor, BoundKind::Upper, "n", n, "graph too large for exact search"));
                } else {
                    let md = metric_dimension_exact(g, group.metric_cap)?;
                    let d = m.diameter.expect("connected") as u64;
                    let k = match &md {
                        MetricDimension::Exact { k, .. } => *k as u64,
                        MetricDimension::AtLeast(k) => *k as u64,
                    };
                    // The bound grows with k, so a lower estimate of k that
                    // already satisfies it settles the check.
                    let mut check = BoundCheck::compare(
                        anchor,
                        BoundKind::Upper,
                        "n",
                        g.n() as u128,
                        bounds::metric_dimension_treewidth(t, d, k),
                    );
                    if matches!(md, MetricDimension::AtLeast(_)) {
                        check.note = Some(format!("metric dimension >= {k}"));
                        if check.holds == Some(false) {
                            check.holds = None;
                        }
                    }
                    m.metric_dimension = Some(md);
                    checks.push(check);
                }
            }
            other => return Err(Error::InvalidArgument(format!("unknown bound `{other}`"))),
        }
    }

    Ok(ExperimentReport {
        key: key.clone(),
        measured: m,
        checks,
        timings: Timings {
            generate_s,
            measure_s: start.elapsed().as_secs_f64(),
        },
    })
}

/// Ratio steps between radii `r` and `2r` for the heuristic anchor.
fn envelope(reports: &[ExperimentReport]) -> Vec<EnvelopeStep> {
    let mut by_key: BTreeMap<InstanceKey, BTreeMap<u32, f64>> = BTreeMap::new();
    for rep in reports {
        for c in &rep.checks {
            if c.anchor == bounds::NC_PLANAR_DEGREE_4 {
                if let Some(ratio) = c.ratio {
                    by_key.entry(rep.key.without_r()).or_default().insert(rep.key.r, ratio);
                }
            }
        }
    }
    let mut steps = Vec::new();
    for (key, ratios) in by_key {
        for (&r, &ratio) in &ratios {
            if let Some(&next) = r.checked_mul(2).and_then(|r2| ratios.get(&r2)) {
                steps.push(EnvelopeStep {
                    anchor: bounds::NC_PLANAR_DEGREE_4.into(),
                    key: key.clone(),
                    r_from: r,
                    r_to: 2 * r,
                    ratio_from: ratio,
                    ratio_to: next,
                    within_factor_2: next <= 2.0 * ratio,
                });
            }
        }
    }
    steps
}

/// Runs every instance of a [`BenchSpec`] in parallel; reports come back in the
/// order of [`expand`].
pub fn bound_harness(spec: &BenchSpec) -> Result<BenchOutcome> {
    let keys = expand(spec)?;
    let reports = keys
        .par_iter()
        .map(|(gi, key)| run_instance(&spec.experiment[*gi], key))
        .collect::<Result<Vec<_>>>()?;
    let envelope = envelope(&reports);
    Ok(BenchOutcome {
        schema_version: SCHEMA_VERSION,
        reports,
        envelope,
    })
}

/// One flat, self-describing CSV row per bound check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CsvRow {
    pub schema_version: u32,
    pub group: String,
    pub generator: String,
    pub seed: u64,
    pub rep: usize,
    pub t: Option<usize>,
    pub n_param: Option<usize>,
    pub w: Option<usize>,
    pub h: Option<usize>,
    pub a_param: Option<usize>,
    pub c: Option<usize>,
    pub p: Option<usize>,
    pub r: u32,
    pub n: usize,
    pub m: usize,
    pub targets: usize,
    pub diameter: Option<u32>,
    pub profiles: usize,
    pub traces: usize,
    pub anchor: String,
    pub kind: BoundKind,
    pub quantity: String,
    pub measured: f64,
    /// Decimal string, since bounds may exceed 64 bits.
    pub bound: Option<String>,
    pub ratio: Option<f64>,
    pub holds: Option<bool>,
    pub note: Option<String>,
    pub generate_s: f64,
    pub measure_s: f64,
}

pub fn csv_rows(outcome: &BenchOutcome) -> Vec<CsvRow> {
    let mut rows = Vec::new();
    for rep in &outcome.reports {
        let (k, m) = (&rep.key, &rep.measured);
        for c in &rep.checks {
            rows.push(CsvRow {
                schema_version: SCHEMA_VERSION,
                group: k.group.clone(),
                generator: k.generator.name().into(),
                seed: k.seed,
                rep: k.rep,
                t: k.t,
                n_param: k.n,
                w: k.w,
                h: k.h,
                a_param: k.a,
                c: k.c,
                p: k.p,
                r: k.r,
                n: m.n,
                m: m.m,
                targets: m.targets,
                diameter: m.diameter,
                profiles: m.profiles,
                traces: m.traces,
                anchor: c.anchor.clone(),
                kind: c.kind,
                quantity: c.quantity.clone(),
                measured: c.measured,
                bound: c.bound.map(|b| b.to_string()),
                ratio: c.ratio,
                holds: c.holds,
                note: c.note.clone(),
                generate_s: rep.timings.generate_s,
                measure_s: rep.timings.measure_s,
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(generator: GeneratorKind, bounds: &[&str]) -> ExperimentGroup {
        ExperimentGroup {
            name: "g".into(),
            generator,
            t: vec![],
            n: vec![],
            w: vec![],
            h: vec![],
            r: vec![2],
            a: vec![],
            c: vec![],
            p: vec![],
            target_mode: TargetMode::Random,
            keep: 1.0,
            diagonal: 0.5,
            density: 1.0,
            repeats: 1,
            bounds: bounds.iter().map(|s| s.to_string()).collect(),
            metric_cap: 5,
            metric_max_n: 40,
        }
    }

    #[test]
    fn treewidth_sweep_passes() {
        let mut g = group(
            GeneratorKind::Ktree,
            &[
                bounds::NC_BOUNDED_TREEWIDTH,
                bounds::GUARDING_BOUNDED_TREEWIDTH,
                bounds::WCOL_BOUNDED_TW,
                bounds::PROFILES_POLYNOMIAL_IN_A,
                bounds::METRIC_DIMENSION,
            ],
        );
        g.t = vec![1, 2];
        g.n = vec![18];
        g.a = vec![4];
        g.r = vec![1, 2, 4];
        let spec = BenchSpec {
            seed: 7,
            experiment: vec![g],
        };
        let out = bound_harness(&spec).unwrap();
        assert_eq!(out.reports.len(), 6);
        assert_eq!(out.violations().count(), 0);
        // The r sweep reuses the graph.
        assert_eq!(out.reports[0].key.seed, out.reports[1].key.seed);
        assert_eq!(out.reports[0].measured.m, out.reports[2].measured.m);
        let rows = csv_rows(&out);
        assert!(rows.iter().all(|row| bounds::ALL_ANCHORS.contains(&row.anchor.as_str())));
    }

    #[test]
    fn lower_bound_family_meets_both_sides() {
        let mut g = group(
            GeneratorKind::LbTw,
            &[bounds::CONSTRUCTION_BOUNDED_TREEWIDTH, bounds::NC_BOUNDED_TREEWIDTH],
        );
        g.t = vec![1];
        g.r = vec![8, 16];
        let out = bound_harness(&BenchSpec {
            seed: 0,
            experiment: vec![g],
        })
        .unwrap();
        assert_eq!(out.violations().count(), 0);
        for rep in &out.reports {
            assert!(rep.checks.iter().all(|c| c.holds == Some(true)));
        }
    }

    #[test]
    fn planar_envelope_is_reported() {
        let mut g = group(
            GeneratorKind::Grid,
            &[bounds::NC_PLANAR_DEGREE_4, bounds::NC_PLANAR_DEGREE_6, bounds::PROFILES_OUTER_FACE],
        );
        g.w = vec![6];
        g.h = vec![6];
        g.a = vec![5];
        g.r = vec![1, 2, 4];
        g.target_mode = TargetMode::Outer;
        let out = bound_harness(&BenchSpec {
            seed: 1,
            experiment: vec![g],
        })
        .unwrap();
        assert_eq!(out.violations().count(), 0);
        assert_eq!(out.envelope.len(), 2);
    }

    #[test]
    fn spec_errors() {
        let bad_anchor = group(GeneratorKind::Ktree, &["no_such_bound"]);
        let mut g = bad_anchor.clone();
        g.t = vec![1];
        g.n = vec![5];
        g.a = vec![1];
        assert!(validate_spec(&BenchSpec {
            seed: 0,
            experiment: vec![g.clone()]
        })
        .is_err());
        g.bounds = vec![bounds::NC_PLANAR_DEGREE_6.into()];
        assert!(validate_spec(&BenchSpec {
            seed: 0,
            experiment: vec![g.clone()]
        })
        .is_err());
        g.bounds = vec![];
        g.n = vec![];
        assert!(validate_spec(&BenchSpec {
            seed: 0,
            experiment: vec![g]
        })
        .is_err());
    }
}
