//! Structural invariants checked on the planar fixtures.

mod common;

use lyapoly::bounds::{analyze_stability, analyze_stabilizability, AnalysisConfig};
use lyapoly::linalg::Matrix;
use lyapoly::lp::{alpha_at, alpha_upper};
use lyapoly::polytope::{build, BuildCaps, HullKind};
use lyapoly::products::{initial_vertices, normalize_family, search_candidate, ProductCandidate, SearchMode, SearchOptions, SearchStrategy};

use common::*;

fn cfg(l: usize) -> AnalysisConfig {
    AnalysisConfig {
        max_word_len: l,
        ..Default::default()
    }
}

fn tau8_cfg(nu: f64) -> AnalysisConfig {
    AnalysisConfig {
        max_word_len: 40,
        search: SearchStrategy::TwoBlockTemplate,
        nu,
        ..Default::default()
    }
}

#[test]
fn euler_generators_of_the_scaled_family_do_not_expand() {
    // P is invariant under B̃, so w + δ((B̃ − I)/τ)w is a convex combination
    // of w and B̃w whenever δ ≤ τ.
    let fam = general_2d();
    let tau = 1.0;
    let a = analyze_stability(&fam, tau, &cfg(8)).unwrap();
    let exps = fam.exponentials(tau).unwrap();
    let scaled = normalize_family(&exps, tau, a.bounds.beta);
    let gens: Vec<Matrix> = scaled.iter().map(|b| b.sub(&Matrix::identity(2)).scale(1.0 / tau)).collect();
    for delta in [1e-3, 0.1, 1.0] {
        let est = alpha_upper(&gens, &a.polytope, delta).unwrap();
        assert!(est.value <= 1e-9, "δ = {delta}: {}", est.value);
    }
}

#[test]
fn alpha_does_not_increase_as_delta_shrinks() {
    let fam = general_2d();
    let a = analyze_stability(&fam, 1.0, &cfg(8)).unwrap();
    let mut prev = f64::INFINITY;
    for delta in [1e-2, 5e-3, 2.5e-3, 1.25e-3] {
        let v = alpha_at(fam.matrices(), &a.polytope, delta).unwrap().value;
        assert!(v <= prev + 1e-6, "δ = {delta}: {v} > {prev}");
        prev = v;
    }
}

#[test]
fn larger_nu_terminates_no_later() {
    let fam = general_2d();
    for (tau, nu, l, strategy) in [(1.0, 1e-3, 8, SearchStrategy::BranchBound), (0.125, 5e-5, 40, SearchStrategy::TwoBlockTemplate)] {
        let run = |nu| {
            let c = AnalysisConfig {
                max_word_len: l,
                search: strategy,
                nu,
                ..Default::default()
            };
            analyze_stability(&fam, tau, &c).unwrap().bounds
        };
        let (a, b) = (run(nu), run(2.0 * nu));
        assert!(a.terminated && b.terminated);
        assert!(b.sweeps <= a.sweeps, "τ = {tau}: {} > {}", b.sweeps, a.sweeps);
    }
}

#[test]
fn vertex_accounting_and_provenance() {
    let fam = general_2d();
    let tau = 0.125;
    let nu = 1e-4;
    let exps = fam.exponentials(tau).unwrap();
    let c = search_candidate(&exps, &SearchOptions::new(40, SearchMode::Max, SearchStrategy::TwoBlockTemplate)).unwrap();
    let scaled = normalize_family(&exps, tau, c.beta(tau) + nu);
    let v0 = initial_vertices(&c, &scaled, false, true).unwrap();
    let (poly, report) = build(&scaled, v0.clone(), HullKind::Symmetric, &BuildCaps::default()).unwrap();
    assert!(report.terminated);
    assert_eq!(poly.len(), report.initial_vertices + report.vertices_added_per_sweep.iter().sum::<usize>());
    // initial vertices are stored in order, after dedup
    let stored_initial: Vec<Vec<f64>> = poly.vertices[..report.initial_vertices].to_vec();
    for (i, v) in poly.vertices.iter().enumerate() {
        let r = report.replay(i, &scaled, &stored_initial);
        let err = v.iter().zip(&r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-10, "vertex {i}: {err}");
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        assert!((poly.membership(v).unwrap() - poly.membership(&neg).unwrap()).abs() <= 1e-12);
    }
    let b = analyze_stability(&fam, tau, &tau8_cfg(nu)).unwrap().bounds;
    assert_eq!(b.raw_vertex_count, poly.len());
}

#[test]
fn normalized_candidate_has_unit_radius() {
    for (fam, tau, mode) in [(general_2d(), 1.0, SearchMode::Max), (positive_2d(), 1.0, SearchMode::Min), (positive_2d(), 0.0625, SearchMode::Min)] {
        let exps = fam.exponentials(tau).unwrap();
        let c = search_candidate(&exps, &SearchOptions::new(8, mode, SearchStrategy::BranchBound)).unwrap();
        let scaled = normalize_family(&exps, tau, c.beta(tau));
        let again = ProductCandidate::evaluate(&c.word, &scaled).unwrap();
        assert!((again.averaged_rho - 1.0).abs() <= 1e-10, "{}", again.averaged_rho);
    }
}

#[test]
fn gap_shrinks_with_tau() {
    let fam = general_2d();
    let coarse = analyze_stability(&fam, 1.0, &cfg(8)).unwrap().bounds;
    let fine = analyze_stability(&fam, 0.125, &tau8_cfg(1e-4)).unwrap().bounds;
    assert!(fine.gamma.unwrap() <= coarse.gamma.unwrap(), "{:?} vs {:?}", fine.gamma, coarse.gamma);

    let fam = positive_2d();
    let lower = |tau, nu| {
        let c = AnalysisConfig {
            nu,
            caps: BuildCaps {
                max_vertices: 2000,
                ..Default::default()
            },
            ..cfg(8)
        };
        analyze_stabilizability(&fam, tau, &c).unwrap().bounds
    };
    let coarse = lower(1.0, 0.0);
    let fine = lower(0.0625, 1e-4);
    assert!(fine.terminated);
    assert!(fine.gamma.unwrap() <= coarse.gamma.unwrap(), "{:?} vs {:?}", fine.gamma, coarse.gamma);
}
