use serde::Serialize;

use super::{exact_with, OracleError, SizeGuard};
use crate::lb::{LbInstance, Predicted};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub family: String,
    pub predicted: Predicted,
    pub optimum: usize,
    /// Witness as sorted node IDs (endpoint IDs for matchings).
    pub witness: Vec<u64>,
    pub verdict: Verdict,
}

/// Solves the predicted problem exactly and compares the optimum against
/// the prediction.
pub fn verify_instance(inst: &LbInstance, guard: SizeGuard) -> Result<VerifyReport, OracleError> {
    let p = &inst.predicted;
    let sol = exact_with(p.problem, &inst.graph, guard)?;
    let verdict = if p.cmp.holds(sol.size, p.value) { Verdict::Pass } else { Verdict::Fail };
    Ok(VerifyReport {
        family: inst.family.to_string(),
        predicted: p.clone(),
        optimum: sol.size,
        witness: sol.ids(&inst.graph),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lb::{mds_fixed_member, mvc_exact_family, Bits};

    #[test]
    fn intersecting_mvc_member_passes() {
        let inst = mvc_exact_family(2, 2, &Bits::ones(4), &Bits::ones(4)).unwrap();
        let r = verify_instance(&inst, SizeGuard::default()).unwrap();
        assert_eq!((r.verdict, r.optimum), (Verdict::Pass, 8));
    }

    #[test]
    fn fixed_member_passes() {
        let inst = mds_fixed_member(4).unwrap();
        let r = verify_instance(&inst, SizeGuard::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.optimum >= 5);
    }

    #[test]
    fn corrupted_prediction_fails() {
        let mut inst = mvc_exact_family(2, 2, &Bits::ones(4), &Bits::ones(4)).unwrap();
        inst.predicted.value = 7;
        let r = verify_instance(&inst, SizeGuard::default()).unwrap();
        assert_eq!((r.verdict, r.optimum, r.predicted.value), (Verdict::Fail, 8, 7));
    }

    #[test]
    fn refusal_propagates() {
        let inst = mds_fixed_member(6).unwrap();
        assert!(matches!(verify_instance(&inst, SizeGuard::default()), Err(OracleError::SizeGuard { .. })));
        let loose = SizeGuard { mvc_maxis: 40, mds: 40 };
        assert_eq!(verify_instance(&inst, loose).unwrap().verdict, Verdict::Pass);
    }
}
