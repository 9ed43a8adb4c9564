//! Left-to-right bag sweep of a path decomposition, width+1 probes per turn.

use super::StrategyError;
use crate::game::{Feedback, Strategy};
use crate::graph::{validate_path_decomposition, Graph, PathDecomposition, Vertex};

/// Probes `X_i` at turn `i`. The robber can never cross the probed bag
/// without a zero hit, so by the last bag it is located.
#[derive(Clone)]
pub struct PathwidthStrategy {
    bags: Vec<Vec<Vertex>>,
    k: usize,
    at: usize,
}

pub fn pathwidth_strategy(
    g: &Graph,
    pd: &PathDecomposition,
) -> Result<PathwidthStrategy, StrategyError> {
    let violations = validate_path_decomposition(g, pd);
    if !violations.is_empty() {
        return Err(StrategyError::InvalidDecomposition(violations));
    }
    Ok(PathwidthStrategy {
        bags: pd.bags.clone(),
        k: pd.width() + 1,
        at: 0,
    })
}

impl Strategy for PathwidthStrategy {
    fn name(&self) -> &'static str {
        "pathwidth"
    }

    fn budget(&self) -> usize {
        self.k
    }

    fn next_probe(&self) -> Vec<Vertex> {
        self.bags[self.at.min(self.bags.len() - 1)].clone()
    }

    fn observe(&mut self, _feedback: &Feedback) {
        if self.at + 1 < self.bags.len() {
            self.at += 1;
        }
    }

    fn fingerprint(&self) -> Vec<u8> {
        let mut f = vec![b'p'];
        f.extend_from_slice(&(self.at as u32).to_le_bytes());
        f
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{verify_strategy, FeedbackModel, VerifyOptions};
    use crate::graph::{exact_pathwidth, FamilySpec};

    fn gen(s: &str) -> Graph {
        FamilySpec::parse(s).unwrap().generate().unwrap()
    }

    #[test]
    fn p4_swept_in_three_bags() {
        let g = gen("path:4");
        let pd = PathDecomposition {
            bags: vec![vec![0, 1], vec![1, 2], vec![2, 3]],
        };
        let s = pathwidth_strategy(&g, &pd).unwrap();
        assert_eq!(s.budget(), 2);
        let out = verify_strategy(
            &g,
            &s,
            FeedbackModel::Centroidal,
            3,
            VerifyOptions::default(),
        )
        .unwrap();
        assert!(out.is_verified());
        assert!(out.max_turns().unwrap() <= 3);
    }

    #[test]
    fn c5_with_exact_decomposition() {
        let g = gen("cycle:5");
        let (w, pd) = exact_pathwidth(&g, 20).unwrap();
        assert_eq!(w, 2);
        let s = pathwidth_strategy(&g, &pd).unwrap();
        assert_eq!(s.budget(), 3);
        let bound = pd.bags.len();
        let out = verify_strategy(
            &g,
            &s,
            FeedbackModel::Centroidal,
            bound,
            VerifyOptions::default(),
        )
        .unwrap();
        assert!(out.is_verified(), "{out:?}");
    }

    #[test]
    fn missing_edge_rejected() {
        let g = gen("path:4");
        let pd = PathDecomposition {
            bags: vec![vec![0, 1], vec![2, 3]],
        };
        match pathwidth_strategy(&g, &pd) {
            Err(StrategyError::InvalidDecomposition(violations)) => {
                assert!(!violations.is_empty());
            }
            other => panic!(
                "expected invalid decomposition, got {:?}",
                other.map(|_| ())
            ),
        }
    }

    #[test]
    fn random_graphs_with_exact_width() {
        for seed in 0..5u64 {
            let g = gen(&format!("random_graph:7:0.35:{seed}"));
            if !g.is_connected() {
                continue;
            }
            let (w, pd) = exact_pathwidth(&g, 20).unwrap();
            let s = pathwidth_strategy(&g, &pd).unwrap();
            assert_eq!(s.budget(), w + 1);
            let out = verify_strategy(
                &g,
                &s,
                FeedbackModel::Centroidal,
                pd.bags.len(),
                VerifyOptions::default(),
            )
            .unwrap();
            assert!(out.is_verified(), "seed {seed}: {out:?}");
        }
    }
}
