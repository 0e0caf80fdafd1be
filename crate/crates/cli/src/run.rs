//! Analysis stages shared by the `analyze`, `pipeline` commands and the tests.

use evotopo_core::{
    classify, edge_contact_report, enclosing_radius, extract_cloud, rips_barcode,
    squared_distance_matrix, Barcode, IterationInterval, PointCloud, ShapeReport,
    SignificancePolicy, Squared, Threshold, Trajectory,
};

use crate::preset::{default_threshold, AnalysisPlan};

pub const EMPTY_CLOUD: &str =
    "empty point cloud: the strategy never occupies a cell in the interval";

#[derive(Debug, Clone)]
pub struct Analysis {
    pub interval: IterationInterval,
    pub cloud: PointCloud,
    /// `None` for an empty cloud.
    pub enclosing_sq: Option<Squared>,
    /// Squared scale the filtration was cut at.
    pub threshold_sq: Squared,
    pub barcode: Barcode,
    /// Frames where other strategies touch the boundary inside the analyzed one.
    pub edge_contacts: Vec<u64>,
}

impl Analysis {
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.cloud.is_empty() {
            out.push(EMPTY_CLOUD.to_string());
        }
        out.extend(self.edge_warning());
        out
    }

    fn edge_warning(&self) -> Option<String> {
        let first = self.edge_contacts.first()?;
        Some(format!(
            "edge contact in {} frame(s), first at t={first}: a cluster enclosed by the analyzed strategy touches \
             the lattice boundary and cannot form a hole or void",
            self.edge_contacts.len()
        ))
    }

    /// Shape report under `policy`, with the edge warning attached.
    pub fn report(&self, policy: &SignificancePolicy) -> ShapeReport {
        let mut r = classify(&self.barcode, policy);
        r.warnings.extend(self.edge_warning());
        r
    }
}

/// Point cloud, distances and barcode (H0 to H2) for `plan` over `traj`.
///
/// The threshold is the plan's value (or 2.5) capped at the enclosing radius;
/// past that radius the complex is a cone, so the cap never changes a bar.
pub fn analyze(traj: &Trajectory, plan: &AnalysisPlan) -> anyhow::Result<Analysis> {
    let interval = match plan.interval {
        Some(iv) => iv,
        None => IterationInterval::full(traj)?,
    };
    let cloud = extract_cloud(traj, plan.strategy, interval, plan.time_scale)?;
    let edge_contacts = edge_contact_report(traj, plan.strategy, interval)?
        .into_iter()
        .map(|c| c.t)
        .collect();
    let wanted = plan.threshold.unwrap_or_else(default_threshold);
    if cloud.is_empty() {
        return Ok(Analysis {
            interval,
            cloud,
            enclosing_sq: None,
            threshold_sq: wanted,
            barcode: Barcode::default(),
            edge_contacts,
        });
    }
    let m = squared_distance_matrix(&cloud);
    let enclosing = enclosing_radius(&m)?;
    let threshold_sq = wanted.min(enclosing);
    let barcode = rips_barcode(&m, 2, Threshold::Squared(threshold_sq))?;
    Ok(Analysis {
        interval,
        cloud,
        enclosing_sq: Some(enclosing),
        threshold_sq,
        barcode,
        edge_contacts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::preset;
    use evotopo_core::{Cell, Classification, GameKind, Lattice, Strategy, TrajectoryMeta};

    #[test]
    fn case2_is_two_holes() {
        let p = preset("case2").unwrap();
        let traj = p.simulate(0, None).unwrap();
        let a = analyze(&traj, &p.analysis).unwrap();
        assert_eq!(a.interval, IterationInterval::new(0, 29).unwrap());
        assert_eq!(
            a.report(&p.analysis.policy).classification,
            Classification::Shape2(2)
        );
    }

    #[test]
    fn absent_strategy_gives_empty_barcode() {
        let p = preset("case3").unwrap();
        let traj = p.simulate(0, None).unwrap();
        let plan = AnalysisPlan::new(Strategy::Cooperator);
        let a = analyze(&traj, &plan).unwrap();
        assert!(a.barcode.is_empty());
        assert_eq!(a.warnings(), vec![EMPTY_CLOUD.to_string()]);
        let r = a.report(&plan.policy);
        assert_eq!(r.classification, Classification::Unclassified);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn threshold_capped_at_enclosing_radius() {
        // A 3x3 block of defectors over two frames; its enclosing radius is
        // below 2.5, so the cap applies and changes no bar.
        let lat = Lattice::from_fn(3, 3, |_| Cell::new(Strategy::Defector, 2)).unwrap();
        let mut traj = Trajectory::new(TrajectoryMeta::new(GameKind::Pd));
        traj.record_frame(&lat, 0).unwrap();
        traj.record_frame(&lat, 1).unwrap();
        let plan = AnalysisPlan::new(Strategy::Defector);
        let capped = analyze(&traj, &plan).unwrap();
        let enclosing = capped.enclosing_sq.unwrap();
        assert!(enclosing < Squared::new(25, 4));
        assert_eq!(capped.threshold_sq, enclosing);
        let m = squared_distance_matrix(&capped.cloud);
        let full = rips_barcode(&m, 2, Threshold::Squared(Squared::from_integer(100))).unwrap();
        // Extra simplices above the cap only add zero-length pairs.
        let long = |b: &Barcode| b.nontrivial().copied().collect::<Vec<_>>();
        assert_eq!(long(&capped.barcode), long(&full));
    }
}
