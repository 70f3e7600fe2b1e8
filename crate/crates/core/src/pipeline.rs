//! End-to-end computation, generic over the scalar backend.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::algebra::{Jet, Matrix, Rational, RationalFunction, Scalar, SlopePolynomial};
use crate::connection::{
    check_concentration, covariant_derivatives, curvature, ConcentrationReport, ConnectionPair,
};
use crate::error::{Error, Result};
use crate::henaut::{
    elimination_matrices, left_inverse_at, pivot_and_left_inverse, seed_matrix, structural_quantities,
    EliminationData, StructuralQuantities,
};
use crate::prolong::{
    assemble_cramer, build_sections, e_tensor_table, g_tensor_table, CramerSystem, DerivativeTable,
    IndexMaps, SectionTable, TensorTable,
};
use crate::web::{coefficients_to_polynomial, WebSpec};

/// Deliberate corruptions used as negative controls by the self-test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign of `H` before elimination.
    NegateH,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PipelineOptions {
    /// Row of `B` to delete (1-based) instead of searching.
    pub i0_override: Option<usize>,
    pub fault: Option<Fault>,
}

/// Every intermediate of one run.
#[derive(Clone, Debug)]
pub struct Computation<S> {
    pub d: usize,
    pub quantities: StructuralQuantities<S>,
    pub elimination: EliminationData<S>,
    /// 1-based.
    pub i0: usize,
    pub t: Matrix<S>,
    pub m: Matrix<S>,
    pub dm: DerivativeTable<S>,
    pub e: TensorTable<S>,
    pub g: TensorTable<S>,
    pub cramer: CramerSystem<S>,
    pub maps: IndexMaps,
    pub sections: SectionTable<S>,
    pub connection: ConnectionPair<S>,
    pub kk: Matrix<S>,
    pub timing_ms: BTreeMap<String, u128>,
}

impl<S: Scalar> Computation<S> {
    pub fn concentration(&self) -> ConcentrationReport {
        check_concentration(&self.kk)
    }
}

struct Clock {
    last: Instant,
    timings: BTreeMap<String, u128>,
}

impl Clock {
    fn new() -> Self {
        Clock { last: Instant::now(), timings: BTreeMap::new() }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.timings.insert(stage.to_string(), (now - self.last).as_millis());
        self.last = now;
    }
}

/// Runs the pipeline on `F` (monic, width `d + 1`).
pub fn run<S: Scalar>(f: &SlopePolynomial<S>, opts: &PipelineOptions) -> Result<Computation<S>> {
    let mut clock = Clock::new();
    let mut quantities = structural_quantities(f)?;
    let d = quantities.d;
    if opts.fault == Some(Fault::NegateH) {
        quantities.h = quantities.h.neg();
    }
    clock.lap("structural");

    let elimination = elimination_matrices(&quantities)?;
    let (i0, t) = match opts.i0_override {
        Some(i0) => (i0, left_inverse_at(&elimination.b, i0)?),
        None => pivot_and_left_inverse(&elimination.b)?,
    };
    let m = seed_matrix(&t, &elimination.emat)?;
    clock.lap("elimination");

    let dm = DerivativeTable::new(&m, d - 3)?;
    let e = e_tensor_table(&dm, d)?;
    let g = g_tensor_table(&dm, &e, d)?;
    let cramer = assemble_cramer(&g, d)?;
    let maps = IndexMaps::new(d);
    let sections = build_sections(&g, &maps, d)?;
    clock.lap("prolongation");

    let connection = covariant_derivatives(&sections, &e, &cramer, &maps)?;
    let kk = curvature(&connection)?;
    clock.lap("curvature");

    Ok(Computation {
        d,
        quantities,
        elimination,
        i0,
        t,
        m,
        dm,
        e,
        g,
        cramer,
        maps,
        sections,
        connection,
        kk,
        timing_ms: clock.timings,
    })
}

/// Symbolic pipeline over rational functions.
pub fn compute(spec: &WebSpec, opts: &PipelineOptions) -> Result<Computation<RationalFunction>> {
    run(&spec.slope_polynomial(), opts)
}

/// Taylor order used by the jet backend. The coefficients are
/// differentiated at most `d - 1` times along the pipeline.
pub fn jet_order(d: usize) -> u32 {
    d as u32
}

/// Lifts the coefficients to jets at a point.
pub fn lift_coefficients(spec: &WebSpec, x: &Rational, y: &Rational) -> Result<Vec<Jet>> {
    let order = jet_order(spec.d);
    spec.coefficients
        .iter()
        .enumerate()
        .map(|(i, a)| {
            Jet::from_ratfunc(a, x, y, order).map_err(|e| match e {
                Error::DivisionByZero => Error::PoleAtPoint { row: i + 1, col: 0 },
                other => other,
            })
        })
        .collect()
}

/// Pipeline over jets at a point.
pub fn run_jet(spec: &WebSpec, x: &Rational, y: &Rational, opts: &PipelineOptions) -> Result<Computation<Jet>> {
    let coeffs = lift_coefficients(spec, x, y)?;
    run(&coefficients_to_polynomial(&coeffs), opts)
}

/// Value of `KK` at a point via the jet backend.
pub fn jet_curvature_at(spec: &WebSpec, x: &Rational, y: &Rational) -> Result<Matrix<Rational>> {
    jet_curvature_with(spec, x, y, &PipelineOptions::default())
}

pub fn jet_curvature_with(
    spec: &WebSpec,
    x: &Rational,
    y: &Rational,
    opts: &PipelineOptions,
) -> Result<Matrix<Rational>> {
    let c = run_jet(spec, x, y, opts)?;
    Ok(c.kk.map(|v| v.value()))
}

/// [`jet_curvature_at`] at many points in parallel; results keep the input
/// order.
pub fn jet_curvature_at_points(
    spec: &WebSpec,
    points: &[(Rational, Rational)],
) -> Vec<Result<Matrix<Rational>>> {
    points.par_iter().map(|(x, y)| jet_curvature_at(spec, x, y)).collect()
}
