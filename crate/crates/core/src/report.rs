//! Degree bounds for the isogenies attached to idempotents, and the
//! per-`(disc, L, c)` summary that joins them with the θ-search and
//! class-group data.

use num_traits::{One, Signed};
use serde::Serialize;

use crate::arith::{is_squarefree, qi, Rational};
use crate::classgrp::{class_number, ideal_class_set};
use crate::error::{Error, Result};
use crate::localsym::{splits_disc, ImagQuadField};
use crate::orders::{optimal_embedding_exists, QuadOrder};
use crate::thetasearch::{compute_m0, find_theta_pair, iso_criterion};

/// `4^g n^2`.
pub fn degree_bound_general(g: u32, norm_alpha: &Rational) -> Result<Rational> {
    if g == 0 || !g.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("g = {g} must be even and positive")));
    }
    if !norm_alpha.is_positive() {
        return Err(Error::InvalidArgument(format!("norm {norm_alpha} must be positive")));
    }
    Ok(qi(4).pow(g as i32) * norm_alpha * norm_alpha)
}

/// `4 c^2 d`, the norm of `2c sqrt(-d)`.
pub fn norm_alpha(c: u64, d: u64) -> u128 {
    4 * (c as u128) * (c as u128) * d as u128
}

/// `(4 c^2 d)^2`.
pub fn degree_bound_surface(c: u64, d: u64) -> u128 {
    let n = norm_alpha(c, d);
    n * n
}

/// `m (4 c^2 d)^2`.
pub fn degree_bound_tilde(c: u64, d: u64, m: u64) -> u128 {
    m as u128 * degree_bound_surface(c, d)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeBoundReport {
    pub disc: u64,
    pub d: u64,
    pub disc_l: i64,
    pub c: u64,
    pub g: u32,
    pub splits: bool,
    pub m0: u64,
    pub s: Option<u32>,
    pub theta1: Option<i64>,
    pub theta2: Option<i64>,
    pub m_used: Option<u64>,
    pub iso_flag: Option<bool>,
    pub opt_embed_exists: bool,
    pub h: u64,
    pub id_set_size: u64,
    #[serde(serialize_with = "crate::arith::serialize_rational")]
    pub norm_alpha: Rational,
    pub bound_general: u128,
    pub bound_surface: u128,
    pub bound_tilde: Option<u128>,
    pub annotation: Option<String>,
}

pub fn assemble_report(disc: u64, l: &ImagQuadField, c: u64) -> Result<DegreeBoundReport> {
    if disc == 0 || !is_squarefree(disc as i64) {
        return Err(Error::InvalidArgument(format!("disc {disc} is not squarefree")));
    }
    if c == 0 {
        return Err(Error::ZeroInput("conductor"));
    }
    let order = QuadOrder::new(*l, c)?;
    let d = l.d();
    let splits = splits_disc(l, disc);
    let (pair, iso_flag, annotation) = if splits {
        (Some(find_theta_pair(disc, l)?), Some(iso_criterion(disc, l)?.holds), None)
    } else {
        (None, None, Some(Error::NotSplittingField.to_string()))
    };
    let m_used = pair.as_ref().map(|p| p.m1);
    let norm = norm_alpha(c, d);
    let general = degree_bound_general(2, &qi(norm as i64))?;
    if !general.denom().is_one() {
        return Err(Error::Overflow("integral degree bound"));
    }
    let bound_general = u128::try_from(general.to_integer()).map_err(|_| Error::Overflow("degree bound"))?;
    Ok(DegreeBoundReport {
        disc,
        d,
        disc_l: l.disc(),
        c,
        g: 2,
        splits,
        m0: compute_m0(disc, l),
        s: pair.as_ref().map(|p| p.s),
        theta1: pair.as_ref().map(|p| p.theta1),
        theta2: pair.as_ref().map(|p| p.theta2),
        m_used,
        iso_flag,
        opt_embed_exists: optimal_embedding_exists(disc, l, c),
        h: class_number(order.discriminant())?,
        id_set_size: ideal_class_set(&order)?.len() as u64,
        norm_alpha: qi(norm as i64),
        bound_general,
        bound_surface: degree_bound_surface(c, d),
        bound_tilde: m_used.map(|m| degree_bound_tilde(c, d, m)),
        annotation,
    })
}
