//! Angle forms and Monte Carlo estimates of graph weights
//! `w_Γ = c_Γ ∫_{C+_{n,m}} dΦ_{e1} ∧ ... ∧ dΦ_{eE}`.
//!
//! Integrals are sampled in one of three charts of `C+_{n,m}`. Free points
//! are drawn from a mixture of radial densities centred on the points placed
//! before them, which makes the importance ratio bounded near collisions.
//! Estimates are reproducible from `(seed, batch index)`; batches run in
//! parallel and are merged in a fixed order.

use crate::error::{Error, Result};
use crate::graded::Sign;
use crate::graphs::{collapse, enumerate_faces, orientation_multiplicity, AdmissibleGraph, BoundaryFace, Vertex};
use crate::scalar::rat_to_f64;
use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

pub type C64 = Complex<f64>;

/// Minimum distance between sampled points; closer samples are discarded.
pub const MIN_SEPARATION: f64 = 1e-9;

/// `Φ_{p→a} = Arg((a - p)/(a - p̄))` in `[0, 2π)`, for `p, a` in the closed
/// upper half plane. Zero when `p` is real.
pub fn angle(p: C64, a: C64) -> Result<f64> {
    if p.im < 0.0 || a.im < 0.0 {
        return Err(Error::Domain(format!("point below the real axis: {} -> {}", p, a)));
    }
    if (a - p).norm() == 0.0 {
        return Err(Error::Domain(format!("coincident points {}", p)));
    }
    if p.im == 0.0 {
        return Ok(0.0);
    }
    let w = (a - p) / (a - p.conj());
    Ok(w.im.atan2(w.re).rem_euclid(2.0 * PI))
}

/// Normalization of the weight forms.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Hash)]
pub enum Normalization {
    /// `1 / ((2π)^{|E|} |E|!)`, one form per edge ordering.
    Ordered,
    /// `1 / ((2π)^{|E|} k_1! ⋯ k_n!)`, one form per compatible ordering.
    Grouped,
}

impl Normalization {
    fn factorial(k: usize) -> f64 {
        (1..=k).map(|i| i as f64).product()
    }

    /// Constant in front of the wedge of edge forms.
    pub fn constant(self, graph: &AdmissibleGraph) -> f64 {
        let e = graph.num_edges();
        let d = match self {
            Normalization::Ordered => Self::factorial(e),
            Normalization::Grouped => graph.out_degrees().iter().map(|&k| Self::factorial(k)).product(),
        };
        1.0 / ((2.0 * PI).powi(e as i32) * d)
    }

    /// Number of edge orderings summed over in the graph expansion.
    pub fn orderings(self, graph: &AdmissibleGraph) -> f64 {
        match self {
            Normalization::Ordered => Self::factorial(graph.num_edges()),
            Normalization::Grouped => graph.out_degrees().iter().map(|&k| Self::factorial(k)).product(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Normalization::Ordered => "ordered",
            Normalization::Grouped => "grouped",
        }
    }
}

/// Coordinate charts of `C+_{n,m}` (0-based indices).
#[derive(Copy, Clone, PartialEq, Eq, Debug, Hash)]
pub enum Chart {
    /// `p_j = i`; coordinates `(a_k, b_k)_{k≠j}, q_1..q_m`.
    FixAerial { aerial: usize },
    /// `q_l = 0`, `p_j = e^{iθ}` with `θ ∈ (0, π)`; coordinates `θ`,
    /// `(a_k, b_k)_{k≠j}`, `q_k (k≠l)`; orientation sign `(-1)^l`.
    FixAerialAndGround { aerial: usize, ground: usize },
    /// `q_l0 = 0`, `q_l1 = 1`; coordinates `(a_k, b_k)`, `q_k (k≠l0,l1)`;
    /// orientation sign `(-1)^{l0+l1+1}` in 0-based indices.
    FixTwoGround { first: usize, second: usize },
}

impl Chart {
    pub fn default_for(n: usize, m: usize) -> Result<Chart> {
        if m >= 2 {
            Ok(Chart::FixTwoGround { first: 0, second: 1 })
        } else if m == 1 && n >= 1 {
            Ok(Chart::FixAerialAndGround { aerial: 0, ground: 0 })
        } else if n >= 1 {
            Ok(Chart::FixAerial { aerial: 0 })
        } else {
            Err(Error::InvalidInput(format!("C+_{{{},{}}} is empty", n, m)))
        }
    }

    fn validate(self, n: usize, m: usize) -> Result<()> {
        let ok = match self {
            Chart::FixAerial { aerial } => aerial < n,
            Chart::FixAerialAndGround { aerial, ground } => aerial < n && ground < m,
            Chart::FixTwoGround { first, second } => first < second && second < m,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("chart {:?} does not apply to C+_{{{},{}}}", self, n, m)))
        }
    }

    fn orientation(self) -> Sign {
        match self {
            Chart::FixAerial { .. } => Sign::PLUS,
            Chart::FixAerialAndGround { ground, .. } => Sign::pow(ground as i64),
            Chart::FixTwoGround { first, second } => Sign::pow((first + second + 1) as i64),
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Place {
    Fixed(C64),
    Plane(usize),
    Line(usize),
    Arc(usize),
}

#[derive(Clone, Debug)]
struct Layout {
    aerial: Vec<Place>,
    ground: Vec<Place>,
    coords: usize,
    sign: Sign,
    /// Points live in `C` (a collapsed aerial cluster) instead of `H ∪ R`.
    planar: bool,
    arc_range: f64,
}

impl Layout {
    fn for_chart(n: usize, m: usize, chart: Chart) -> Result<Layout> {
        chart.validate(n, m)?;
        let mut c = 0usize;
        let mut next = |k: usize| {
            let s = c;
            c += k;
            s
        };
        let mut aerial = vec![Place::Fixed(C64::new(0.0, 0.0)); n];
        let mut ground = vec![Place::Fixed(C64::new(0.0, 0.0)); m];
        match chart {
            Chart::FixAerial { aerial: j0 } => {
                for (j, a) in aerial.iter_mut().enumerate() {
                    *a = if j == j0 { Place::Fixed(C64::new(0.0, 1.0)) } else { Place::Plane(next(2)) };
                }
                for g in ground.iter_mut() {
                    *g = Place::Line(next(1));
                }
            }
            Chart::FixAerialAndGround { aerial: j0, ground: l0 } => {
                aerial[j0] = Place::Arc(next(1));
                for (j, a) in aerial.iter_mut().enumerate() {
                    if j != j0 {
                        *a = Place::Plane(next(2));
                    }
                }
                for (l, g) in ground.iter_mut().enumerate() {
                    *g = if l == l0 { Place::Fixed(C64::new(0.0, 0.0)) } else { Place::Line(next(1)) };
                }
            }
            Chart::FixTwoGround { first, second } => {
                for a in aerial.iter_mut() {
                    *a = Place::Plane(next(2));
                }
                for (l, g) in ground.iter_mut().enumerate() {
                    *g = if l == first {
                        Place::Fixed(C64::new(0.0, 0.0))
                    } else if l == second {
                        Place::Fixed(C64::new(1.0, 0.0))
                    } else {
                        Place::Line(next(1))
                    };
                }
            }
        }
        Ok(Layout { aerial, ground, coords: c, sign: chart.orientation(), planar: false, arc_range: PI })
    }

    /// `p_0 = 0`, `p_1 = e^{iθ}` with `θ ∈ [0, 2π)`, other points free in `C`.
    fn for_cluster(n: usize) -> Result<Layout> {
        if n < 2 {
            return Err(Error::InvalidInput("a collapsed cluster has at least two points".into()));
        }
        let mut aerial = vec![Place::Fixed(C64::new(0.0, 0.0)), Place::Arc(0)];
        for j in 2..n {
            aerial.push(Place::Plane(1 + 2 * (j - 2)));
        }
        Ok(Layout { aerial, ground: Vec::new(), coords: 2 * n - 3, sign: Sign::PLUS, planar: true, arc_range: 2.0 * PI })
    }
}

#[derive(Clone, Debug)]
struct Point {
    z: C64,
    /// `(coordinate, ∂z/∂coordinate)`.
    grad: Vec<(usize, C64)>,
}

fn radial_density(p: C64, a: C64) -> f64 {
    let r = (p - a).norm();
    1.0 / ((1.0 + r).powi(2) * 2.0 * PI * r)
}

fn line_density(t: f64, a: f64) -> f64 {
    0.5 / (1.0 + (t - a).abs()).powi(2)
}

struct Sample {
    aerial: Vec<Point>,
    ground: Vec<Point>,
    density: f64,
    inside: bool,
}

fn draw(layout: &Layout, rng: &mut ChaCha8Rng) -> Sample {
    let mut density = 1.0;
    let mut aerial: Vec<Option<Point>> = vec![None; layout.aerial.len()];
    let mut ground: Vec<Option<Point>> = vec![None; layout.ground.len()];
    for (j, place) in layout.aerial.iter().enumerate() {
        match *place {
            Place::Fixed(z) => aerial[j] = Some(Point { z, grad: Vec::new() }),
            Place::Arc(c) => {
                let theta = rng.gen::<f64>() * layout.arc_range;
                density /= layout.arc_range;
                let z = C64::new(theta.cos(), theta.sin());
                aerial[j] = Some(Point { z, grad: vec![(c, C64::new(0.0, 1.0) * z)] });
            }
            _ => {}
        }
    }
    for (l, place) in layout.ground.iter().enumerate() {
        if let Place::Fixed(z) = *place {
            ground[l] = Some(Point { z, grad: Vec::new() });
        }
    }
    for l in 0..layout.ground.len() {
        if let Place::Line(c) = layout.ground[l] {
            let anchors: Vec<f64> = ground
                .iter()
                .flatten()
                .map(|p| p.z.re)
                .chain(aerial.iter().flatten().map(|p| p.z.re))
                .collect();
            let anchors = if anchors.is_empty() { vec![0.0] } else { anchors };
            let a = anchors[rng.gen_range(0..anchors.len())];
            let u: f64 = rng.gen();
            let s = u / (1.0 - u);
            let t = if rng.gen::<bool>() { a + s } else { a - s };
            density *= anchors.iter().map(|&b| line_density(t, b)).sum::<f64>() / anchors.len() as f64;
            ground[l] = Some(Point { z: C64::new(t, 0.0), grad: vec![(c, C64::new(1.0, 0.0))] });
        }
    }
    for j in 0..layout.aerial.len() {
        if let Place::Plane(c) = layout.aerial[j] {
            let anchors: Vec<C64> = ground.iter().flatten().chain(aerial.iter().flatten()).map(|p| p.z).collect();
            let anchors = if anchors.is_empty() { vec![C64::new(0.0, 0.0)] } else { anchors };
            let a = anchors[rng.gen_range(0..anchors.len())];
            let u: f64 = rng.gen();
            let r = u / (1.0 - u);
            let phi = rng.gen::<f64>() * 2.0 * PI;
            let z = a + C64::new(r * phi.cos(), r * phi.sin());
            density *= anchors.iter().map(|&b| radial_density(z, b)).sum::<f64>() / anchors.len() as f64;
            aerial[j] = Some(Point {
                z,
                grad: vec![(c, C64::new(1.0, 0.0)), (c + 1, C64::new(0.0, 1.0))],
            });
        }
    }
    let aerial: Vec<Point> = aerial.into_iter().map(|p| p.expect("aerial point placed")).collect();
    let ground: Vec<Point> = ground.into_iter().map(|p| p.expect("ground point placed")).collect();
    let inside = (layout.planar || aerial.iter().all(|p| p.z.im > 0.0))
        && ground.windows(2).all(|w| w[0].z.re < w[1].z.re);
    Sample { aerial, ground, density, inside }
}

fn too_close(s: &Sample) -> bool {
    let pts: Vec<C64> = s.aerial.iter().chain(&s.ground).map(|p| p.z).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if (pts[i] - pts[j]).norm() < MIN_SEPARATION {
                return true;
            }
        }
    }
    false
}

fn angle_gradient(src: &Point, dst: &Point, planar: bool, coords: usize) -> Vec<f64> {
    let mut row = vec![0.0; coords];
    let w = dst.z - src.z;
    let wb = dst.z - src.z.conj();
    for &(c, dz) in &dst.grad {
        row[c] += (dz / w).im;
        if !planar {
            row[c] -= (dz / wb).im;
        }
    }
    for &(c, dz) in &src.grad {
        row[c] -= (dz / w).im;
        if !planar {
            row[c] += (dz.conj() / wb).im;
        }
    }
    row
}

fn integrand(graph: &AdmissibleGraph, layout: &Layout, s: &Sample) -> f64 {
    let e = graph.num_edges();
    if e == 0 {
        return 1.0;
    }
    let mut m = DMatrix::<f64>::zeros(e, layout.coords);
    for (k, edge) in graph.edges().iter().enumerate() {
        let src = &s.aerial[edge.source];
        let dst = match edge.target {
            Vertex::Aerial(t) => &s.aerial[t],
            Vertex::Ground(t) => &s.ground[t],
        };
        for (c, v) in angle_gradient(src, dst, layout.planar, layout.coords).into_iter().enumerate() {
            m[(k, c)] = v;
        }
    }
    m.determinant()
}

/// Monte Carlo settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub batch_size: usize,
    pub normalization: Normalization,
    pub chart: Option<Chart>,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { samples: 100_000, seed: 1, batch_size: 4096, normalization: Normalization::Ordered, chart: None }
    }
}

impl McConfig {
    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_chart(mut self, chart: Chart) -> Self {
        self.chart = Some(chart);
        self
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub rejected: usize,
    pub seed: u64,
    pub normalization: Normalization,
}

impl WeightEstimate {
    pub fn exact(value: f64, seed: u64, normalization: Normalization) -> Self {
        WeightEstimate { mean: value, stderr: 0.0, samples: 0, rejected: 0, seed, normalization }
    }

    /// Coefficient of `B_Γ` in the graph expansion, `∫ ∧ dΦ / (2π)^{|E|}`,
    /// as `(mean, stderr)`.
    pub fn expansion_coefficient(&self, graph: &AdmissibleGraph) -> (f64, f64) {
        let k = self.normalization.orderings(graph);
        (self.mean * k, self.stderr * k)
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    count: f64,
    mean: f64,
    m2: f64,
    rejected: usize,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    fn merge(a: Moments, b: Moments) -> Moments {
        if a.count == 0.0 {
            return Moments { rejected: a.rejected + b.rejected, ..b };
        }
        if b.count == 0.0 {
            return Moments { rejected: a.rejected + b.rejected, ..a };
        }
        let count = a.count + b.count;
        let d = b.mean - a.mean;
        Moments {
            count,
            mean: a.mean + d * b.count / count,
            m2: a.m2 + b.m2 + d * d * a.count * b.count / count,
            rejected: a.rejected + b.rejected,
        }
    }
}

fn merge_pairwise(mut parts: Vec<Moments>) -> Moments {
    if parts.is_empty() {
        return Moments::default();
    }
    while parts.len() > 1 {
        parts = parts.chunks(2).map(|c| if c.len() == 2 { Moments::merge(c[0], c[1]) } else { c[0] }).collect();
    }
    parts[0]
}

fn integrate(graph: &AdmissibleGraph, layout: &Layout, scale: f64, config: &McConfig) -> WeightEstimate {
    let batch = config.batch_size.max(1);
    let batches = config.samples.div_ceil(batch);
    let parts: Vec<Moments> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(b as u64);
            let count = batch.min(config.samples - b * batch);
            let mut mom = Moments::default();
            for _ in 0..count {
                let s = draw(layout, &mut rng);
                if !s.inside {
                    mom.push(0.0);
                    continue;
                }
                if too_close(&s) {
                    mom.rejected += 1;
                    mom.push(0.0);
                    continue;
                }
                mom.push(scale * integrand(graph, layout, &s) / s.density);
            }
            mom
        })
        .collect();
    let total = merge_pairwise(parts);
    let var = if total.count > 1.0 { total.m2 / (total.count - 1.0) } else { 0.0 };
    WeightEstimate {
        mean: total.mean,
        stderr: (var / total.count.max(1.0)).sqrt(),
        samples: config.samples,
        rejected: total.rejected,
        seed: config.seed,
        normalization: config.normalization,
    }
}

/// Estimate of `w_Γ` for the edge order of `graph`. Graphs whose edge count
/// differs from `dim C+_{n,m}` get the exact value 0, and a zero-dimensional
/// configuration space gives exactly 1.
pub fn weight_mc(graph: &AdmissibleGraph, config: &McConfig) -> Result<WeightEstimate> {
    let (n, m) = (graph.n(), graph.m());
    if 2 * n + m < 2 {
        return Err(Error::InvalidInput(format!("C+_{{{},{}}} is empty", n, m)));
    }
    let chart = match config.chart {
        Some(c) => c,
        None => Chart::default_for(n, m)?,
    };
    let layout = Layout::for_chart(n, m, chart)?;
    if graph.num_edges() as i64 != graph.dimension() {
        return Ok(WeightEstimate::exact(0.0, config.seed, config.normalization));
    }
    if graph.num_edges() == 0 {
        return Ok(WeightEstimate::exact(1.0, config.seed, config.normalization));
    }
    let scale = layout.sign.to_i64() as f64 * config.normalization.constant(graph);
    Ok(integrate(graph, &layout, scale, config))
}

/// Estimate of the normalized integral over the space `C_n` of a collapsed
/// cluster (`n` points of `C` modulo complex translations and dilations).
/// The graph has `m = 0`; angles are plain arguments of differences.
pub fn cluster_weight_mc(graph: &AdmissibleGraph, config: &McConfig) -> Result<WeightEstimate> {
    if graph.m() != 0 {
        return Err(Error::InvalidInput("cluster graphs have no ground vertices".into()));
    }
    let layout = Layout::for_cluster(graph.n())?;
    if graph.num_edges() != layout.coords {
        return Ok(WeightEstimate::exact(0.0, config.seed, config.normalization));
    }
    let scale = config.normalization.constant(graph);
    Ok(integrate(graph, &layout, scale, config))
}

/// Source of weight estimates for canonical graphs.
pub trait WeightProvider: Sync {
    fn weight(&self, graph: &AdmissibleGraph) -> Result<WeightEstimate>;
}

fn mix_seed(seed: u64, hash: u64) -> u64 {
    let mut z = seed ^ hash.rotate_left(17) ^ 0x9E37_79B9_7F4A_7C15;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Computes weights on demand with a per-graph seed derived from the base
/// seed and the graph hash, caching results.
pub struct MonteCarloProvider {
    config: McConfig,
    cache: Mutex<HashMap<u64, WeightEstimate>>,
}

impl MonteCarloProvider {
    pub fn new(config: McConfig) -> Self {
        MonteCarloProvider { config, cache: Mutex::new(HashMap::new()) }
    }

    pub fn config(&self) -> &McConfig {
        &self.config
    }

    pub fn seed_for(&self, graph: &AdmissibleGraph) -> u64 {
        mix_seed(self.config.seed, graph.hash())
    }
}

impl WeightProvider for MonteCarloProvider {
    fn weight(&self, graph: &AdmissibleGraph) -> Result<WeightEstimate> {
        let (g, sign) = graph.canonical();
        let h = g.hash();
        if let Some(w) = self.cache.lock().expect("weight cache").get(&h) {
            return Ok(signed(w.clone(), sign));
        }
        let cfg = McConfig { seed: self.seed_for(&g), chart: None, ..self.config };
        let w = weight_mc(&g, &cfg)?;
        self.cache.lock().expect("weight cache").insert(h, w.clone());
        Ok(signed(w, sign))
    }
}

fn signed(mut w: WeightEstimate, s: Sign) -> WeightEstimate {
    if s.is_negative() {
        w.mean = -w.mean;
    }
    w
}

/// Weights read from a table, keyed by graph hash.
#[derive(Clone, Debug, Default)]
pub struct TableProvider {
    pub entries: HashMap<u64, WeightEstimate>,
}

impl WeightProvider for TableProvider {
    fn weight(&self, graph: &AdmissibleGraph) -> Result<WeightEstimate> {
        let (g, sign) = graph.canonical();
        if g.num_edges() as i64 != g.dimension() {
            return Ok(WeightEstimate::exact(0.0, 0, Normalization::Ordered));
        }
        match self.entries.get(&g.hash()) {
            Some(w) => Ok(signed(w.clone(), sign)),
            None => Err(Error::InvalidInput(format!("no weight recorded for graph {}", g.key()))),
        }
    }
}

/// Contribution of one boundary face to the Stokes sum.
#[derive(Clone, Debug)]
pub struct FaceTerm {
    pub face: BoundaryFace,
    pub value: f64,
    pub stderr: f64,
}

fn product_estimate(a: &WeightEstimate, b: &WeightEstimate) -> (f64, f64) {
    let v = a.mean * b.mean;
    let s = ((a.stderr * b.mean).powi(2) + (a.mean * b.stderr).powi(2)).sqrt();
    (v, s)
}

fn factor_seed(seed: u64, graph: &AdmissibleGraph, kind: u64) -> u64 {
    mix_seed(seed ^ kind, graph.hash())
}

/// `∫_F ω'_Γ` on one face, with `ω'` in the ordered normalization. `None`
/// when the form restricts to zero on the face.
pub fn face_integral(graph: &AdmissibleGraph, face: &BoundaryFace, config: &McConfig) -> Result<Option<FaceTerm>> {
    let col = match collapse(graph, face) {
        Some(c) => c,
        None => return Ok(None),
    };
    let cfg = McConfig { normalization: Normalization::Ordered, chart: None, ..*config };
    let inner = match face {
        BoundaryFace::Aerial { .. } => {
            cluster_weight_mc(&col.inner, &McConfig { seed: factor_seed(config.seed, &col.inner, 1), ..cfg })?
        }
        BoundaryFace::Ground { .. } => {
            weight_mc(&col.inner, &McConfig { seed: factor_seed(config.seed, &col.inner, 2), ..cfg })?
        }
    };
    let outer = weight_mc(&col.outer, &McConfig { seed: factor_seed(config.seed, &col.outer, 3), ..cfg })?;
    let mult = rat_to_f64(&orientation_multiplicity(col.inner.num_edges(), col.outer.num_edges()));
    let s = (face.orientation_sign() * col.sign).to_i64() as f64 * mult;
    let (v, e) = product_estimate(&inner, &outer);
    Ok(Some(FaceTerm { face: face.clone(), value: s * v, stderr: e * mult }))
}

#[derive(Clone, Debug)]
pub struct StokesReport {
    pub total: f64,
    pub stderr: f64,
    pub terms: Vec<FaceTerm>,
}

/// `Σ_F ∫_F ω'_Γ` for a graph with `2n + m - 3` edges; zero by Stokes.
pub fn stokes_residual(graph: &AdmissibleGraph, config: &McConfig) -> Result<StokesReport> {
    if graph.num_edges() as i64 != graph.dimension() - 1 {
        return Err(Error::InvalidInput(format!(
            "Stokes check needs {} edges, graph has {}",
            graph.dimension() - 1,
            graph.num_edges()
        )));
    }
    let mut terms = Vec::new();
    for face in enumerate_faces(graph.n(), graph.m()) {
        if let Some(t) = face_integral(graph, &face, config)? {
            terms.push(t);
        }
    }
    let total = terms.iter().map(|t| t.value).sum();
    let stderr = terms.iter().map(|t| t.stderr.powi(2)).sum::<f64>().sqrt();
    Ok(StokesReport { total, stderr, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Edge;

    fn g(n: usize, m: usize, e: &[(usize, Vertex)]) -> AdmissibleGraph {
        AdmissibleGraph::new(n, m, e.iter().map(|&(s, t)| Edge::new(s, t)).collect()).unwrap()
    }

    #[test]
    fn angle_values() {
        let a = angle(C64::new(0.0, 1.0), C64::new(0.0, 0.0)).unwrap();
        assert!((a - PI).abs() < 1e-12);
        assert_eq!(angle(C64::new(2.0, 0.0), C64::new(0.0, 1.0)).unwrap(), 0.0);
        assert!(angle(C64::new(0.0, 1.0), C64::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn single_edge_is_exact_on_arc_chart() {
        let e = g(1, 1, &[(0, Vertex::Ground(0))]);
        let w = weight_mc(&e, &McConfig::default().with_samples(1000)).unwrap();
        assert!((w.mean - 1.0).abs() < 1e-12);
        assert!(w.stderr < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_zero() {
        let e = g(1, 2, &[(0, Vertex::Ground(0))]);
        let w = weight_mc(&e, &McConfig::default()).unwrap();
        assert_eq!(w.mean, 0.0);
        assert_eq!(w.stderr, 0.0);
    }

    #[test]
    fn deterministic_for_seed() {
        let e = g(1, 2, &[(0, Vertex::Ground(0)), (0, Vertex::Ground(1))]);
        let c = McConfig::default().with_samples(20_000).with_seed(7);
        let a = weight_mc(&e, &c).unwrap();
        let b = weight_mc(&e, &c).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn reversed_edges_flip_sign() {
        let e = g(1, 2, &[(0, Vertex::Ground(1)), (0, Vertex::Ground(0))]);
        let p = MonteCarloProvider::new(McConfig::default().with_samples(20_000));
        let (c, _) = e.canonical();
        let a = p.weight(&e).unwrap();
        let b = p.weight(&c).unwrap();
        assert_eq!(a.mean, -b.mean);
    }

    #[test]
    fn seed_mixing_spreads() {
        assert_ne!(mix_seed(1, 2), mix_seed(1, 3));
        assert_ne!(mix_seed(1, 2), mix_seed(2, 2));
    }
}
