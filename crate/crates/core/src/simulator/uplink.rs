//! Uplink with full channel inversion: one UE per Voronoi cell, each UE
//! received at its own BS with level ρ, observed from a BS at the origin.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use super::empirical::EmpiricalDistribution;
use super::rng::{stream, Stream};
use super::{LinkSample, Scenario, SimulationPlan};
use crate::error::{Error, Result};
use crate::geometry::{sample_ppp, AnnularRegion, Point};
use crate::numerics::special::gamma;

/// Expected number of BSs in the default simulation disk.
const DEFAULT_BS_COUNT: f64 = 200.0;
/// Rejection attempts before a UE is placed on its BS.
const MAX_ATTEMPTS: usize = 10_000;

/// Where each BS's scheduled UE is placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UePlacement {
    /// Uniform over the BS's Voronoi cell.
    #[default]
    UniformInCell,
    /// Rayleigh link length with density 2πλr·e^{−πλr²} and uniform angle,
    /// ignoring the cell boundary.
    NearestDistance,
}

/// Uniform bucket grid for nearest-BS queries.
struct Grid {
    points: Vec<Point>,
    cells: Vec<Vec<usize>>,
    origin: f64,
    size: f64,
    side: usize,
}

impl Grid {
    fn new(points: Vec<Point>, half_width: f64, size: f64) -> Self {
        let side = ((2.0 * half_width / size).ceil() as usize).max(1);
        let mut cells = vec![Vec::new(); side * side];
        let origin = -half_width;
        let mut grid = Self {
            points: Vec::new(),
            cells: Vec::new(),
            origin,
            size,
            side,
        };
        for (i, p) in points.iter().enumerate() {
            let (cx, cy) = grid.cell_of(p);
            cells[cy * side + cx].push(i);
        }
        grid.points = points;
        grid.cells = cells;
        grid
    }

    fn cell_of(&self, p: &Point) -> (usize, usize) {
        let clamp = |v: f64| (((v - self.origin) / self.size).floor().max(0.0) as usize).min(self.side - 1);
        (clamp(p.x), clamp(p.y))
    }

    /// Index of the BS nearest to `q`, searching rings of cells outward.
    fn nearest(&self, q: &Point) -> usize {
        let (cx, cy) = self.cell_of(q);
        let (cx, cy) = (cx as isize, cy as isize);
        let side = self.side as isize;
        let mut best = (usize::MAX, f64::INFINITY);
        for k in 0..=side {
            for y in (cy - k)..=(cy + k) {
                for x in (cx - k)..=(cx + k) {
                    let on_ring = (y - cy).abs() == k || (x - cx).abs() == k;
                    if !on_ring || x < 0 || y < 0 || x >= side || y >= side {
                        continue;
                    }
                    for &i in &self.cells[(y * side + x) as usize] {
                        let d = self.points[i].distance(q);
                        if d < best.1 {
                            best = (i, d);
                        }
                    }
                }
            }
            // every point in ring k + 1 or beyond is at least k cells away
            if best.1 <= k as f64 * self.size {
                break;
            }
        }
        best.0
    }
}

/// One uplink realization: interference at the origin BS from the UEs of
/// every other BS, with the mean contribution beyond the disk added back.
pub(crate) fn uplink_link(
    lambda: f64,
    rho: f64,
    eta: f64,
    outer: Option<f64>,
    placement: UePlacement,
    rng: &mut Stream,
) -> Result<LinkSample> {
    let radius = outer.unwrap_or_else(|| (DEFAULT_BS_COUNT / (PI * lambda)).sqrt());
    let spacing = 1.0 / lambda.sqrt();
    let mut bss = vec![Point::new(0.0, 0.0)];
    bss.extend(sample_ppp(lambda, &AnnularRegion::new(0.0, radius)?, rng));
    let grid = Grid::new(bss, radius, spacing);
    let reach = 2.0 * spacing;
    let mut interference = 0.0;
    for b in 1..grid.points.len() {
        let bs = grid.points[b];
        let ue = match placement {
            UePlacement::UniformInCell => {
                let mut ue = bs;
                for _ in 0..MAX_ATTEMPTS {
                    let r = reach * rng.random::<f64>().sqrt();
                    let th = 2.0 * PI * rng.random::<f64>();
                    let cand = Point::new(bs.x + r * th.cos(), bs.y + r * th.sin());
                    if grid.nearest(&cand) == b {
                        ue = cand;
                        break;
                    }
                }
                ue
            }
            UePlacement::NearestDistance => {
                let u: f64 = Exp1.sample(rng);
                let r = (u / (PI * lambda)).sqrt();
                let th = 2.0 * PI * rng.random::<f64>();
                Point::new(bs.x + r * th.cos(), bs.y + r * th.sin())
            }
        };
        let link = ue.distance(&bs);
        let h: f64 = Exp1.sample(rng);
        interference += rho * (link / ue.norm()).powf(eta) * h;
    }
    // E r^η = Γ(1 + η/2)/(πλ)^{η/2} for the Rayleigh-distributed link length
    let mean_inverted = rho * gamma(1.0 + 0.5 * eta) / (PI * lambda).powf(0.5 * eta);
    interference += 2.0 * PI * lambda * mean_inverted * radius.powf(2.0 - eta) / (eta - 2.0);
    Ok(LinkSample {
        signal: rho,
        gain: Exp1.sample(rng),
        interference,
    })
}

/// Empirical uplink SIR distribution at a typical BS, UEs uniform in their cells.
pub fn simulate_uplink(lambda_bs: f64, eta: f64, plan: &SimulationPlan) -> Result<EmpiricalDistribution> {
    simulate_uplink_placed(lambda_bs, eta, plan, UePlacement::UniformInCell)
}

/// [`simulate_uplink`] with an explicit UE placement law.
pub fn simulate_uplink_placed(
    lambda_bs: f64,
    eta: f64,
    plan: &SimulationPlan,
    placement: UePlacement,
) -> Result<EmpiricalDistribution> {
    plan.validate()?;
    crate::error::check_eta(eta)?;
    if !(lambda_bs > 0.0) {
        return Err(Error::Domain(format!("lambda_bs must be positive, got {lambda_bs}")));
    }
    let Scenario::Uplink { rho } = plan.scenario else {
        return Err(Error::Validation("simulate_uplink needs an uplink scenario".into()));
    };
    let links: Vec<LinkSample> = (0..plan.realizations)
        .into_par_iter()
        .map(|i| uplink_link(lambda_bs, rho, eta, plan.outer_radius, placement, &mut stream(plan.seed, i as u64)))
        .collect::<Result<_>>()?;
    EmpiricalDistribution::new(links.iter().map(|l| l.sinr(0.0)).collect())
}
