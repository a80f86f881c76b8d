//! Attractor-sample sweeps for plotting: at each parameter value, drop
//! a transient and keep a fixed number of successive orbit points.

use feigen_core::bifurcation::ParamPath;
use feigen_core::dynamics::default_seed;
use feigen_core::family::MapFamily;

#[derive(Clone, Copy, Debug)]
pub struct DiagramOptions {
    pub transient: u64,
    pub samples: u32,
    /// starting point override; otherwise the dominant extremum
    pub seed: Option<f64>,
}

impl Default for DiagramOptions {
    fn default() -> Self {
        DiagramOptions {
            transient: 2000,
            samples: 200,
            seed: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagramRow {
    pub t: f64,
    /// empty when the orbit faulted or left the domain
    pub xs: Vec<f64>,
    pub fault: bool,
}

/// `grid` parameter values across `range`, inclusive of both ends
/// (a single column when grid ≤ 1).
pub fn diagram(
    family: &MapFamily,
    path: &ParamPath,
    range: (f64, f64),
    grid: u32,
    opts: &DiagramOptions,
) -> Vec<DiagramRow> {
    let n = grid.max(1);
    let mut rows = Vec::with_capacity(n as usize);
    for i in 0..n {
        let t = if n == 1 {
            range.0
        } else {
            range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
        };
        rows.push(column(family, path, t, opts));
    }
    rows
}

fn column(family: &MapFamily, path: &ParamPath, t: f64, opts: &DiagramOptions) -> DiagramRow {
    let params = path.point(t);
    let Some(seed) = opts.seed.or_else(|| default_seed(family, params)) else {
        return DiagramRow {
            t,
            xs: Vec::new(),
            fault: true,
        };
    };
    let b = params.bindings();
    let mut x = family.domain.clamp_interior(seed);
    let fault = DiagramRow {
        t,
        xs: Vec::new(),
        fault: true,
    };
    for _ in 0..opts.transient {
        match family.eval(x, &b) {
            Ok(y) if family.domain.contains(y) => x = y,
            _ => return fault,
        }
    }
    let mut xs = Vec::with_capacity(opts.samples as usize);
    for _ in 0..opts.samples {
        match family.eval(x, &b) {
            Ok(y) if family.domain.contains(y) => {
                x = y;
                xs.push(x);
            }
            _ => return fault,
        }
    }
    DiagramRow {
        t,
        xs,
        fault: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use feigen_core::catalog;

    #[test]
    fn sample_counts_are_constant_and_branches_split() {
        let family = catalog::family("logistic").unwrap();
        let rows = diagram(
            &family,
            &ParamPath::along_a(),
            (2.8, 3.2),
            9,
            &DiagramOptions::default(),
        );
        assert_eq!(rows.len(), 9);
        for r in &rows {
            assert!(!r.fault);
            assert_eq!(r.xs.len(), 200);
        }
        // before the first flip every sample sits on the fixed point
        let spread = |r: &DiagramRow| {
            let lo = r.xs.iter().cloned().fold(f64::MAX, f64::min);
            let hi = r.xs.iter().cloned().fold(f64::MIN, f64::max);
            hi - lo
        };
        assert!(spread(&rows[0]) < 1e-6);
        assert!(spread(rows.last().unwrap()) > 0.1);
    }

    #[test]
    fn degenerate_sweep_is_a_single_column() {
        let family = catalog::family("logistic").unwrap();
        let rows = diagram(
            &family,
            &ParamPath::along_a(),
            (3.2, 3.5),
            1,
            &DiagramOptions::default(),
        );
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].t, 3.2);
    }

    #[test]
    fn escaping_parameters_are_flagged_not_fatal() {
        let family = catalog::family("logistic").unwrap();
        let rows = diagram(
            &family,
            &ParamPath::along_a(),
            (3.9, 4.2),
            4,
            &DiagramOptions::default(),
        );
        assert!(rows.last().unwrap().fault);
        assert!(rows.last().unwrap().xs.is_empty());
        assert!(!rows[0].fault);
    }
}
