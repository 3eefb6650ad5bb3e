use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use quatcm_core::classgrp::{class_group, count_a_dc, ideal_class_set, reduced_forms};
use quatcm_core::localsym::{hilbert_formula, hilbert_infinity, ramification_set, splits};
use quatcm_core::orders::{
    embedding_conductor, maximal_order, optimal_embedding_exists, reduced_discriminant, QuadOrder, QuatOrder,
};
use quatcm_core::quat::embedding_from_element;
use quatcm_core::report::{
    assemble_report, degree_bound_general, degree_bound_surface, degree_bound_tilde, norm_alpha,
};
use quatcm_core::tensor::{
    embedding_from_idempotent, find_u, idempotent_from_embedding, tnorm, ttrace, u_conjugates_to_complement,
    verify_iota_identities, LScalar, TensorAlgebra,
};
use quatcm_core::thetasearch::{algebra_for_disc, check_theta, find_theta_pair, presents};
use quatcm_core::{arith, qi, Error, ImagQuadField, QuatAlgebra, QuatElement, Rational};

use crate::output::{int, ints, Format, Output};
use crate::{AlgebraArgs, Cmd};

pub enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type CmdResult = Result<Output, Failure>;

pub const TABLE_COLUMNS: [&str; 15] = [
    "disc",
    "d",
    "Delta_L",
    "splits",
    "m0",
    "s",
    "theta1",
    "theta2",
    "iso_flag",
    "opt_embed_exists",
    "h",
    "id_set_size",
    "bound_general",
    "bound_surface",
    "bound_tilde",
];

fn algebra(args: &AlgebraArgs) -> Result<Arc<QuatAlgebra>, Failure> {
    match (&args.a, &args.b, args.disc) {
        (Some(a), Some(b), None) => Ok(QuatAlgebra::new(a.clone(), b.clone())?),
        (None, None, Some(disc)) => Ok(algebra_for_disc(disc)?),
        _ => Err(Failure::Usage("give either -a and -b, or --disc".into())),
    }
}

fn field(d: u64) -> Result<ImagQuadField, Failure> {
    Ok(ImagQuadField::new(d)?)
}

fn rational(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn coords(x: &QuatElement) -> Value {
    json!(x.coord_strings())
}

fn lscalar(x: &LScalar) -> Value {
    json!([x.rational.to_string(), x.alpha.to_string()])
}

fn algebra_params(alg: &QuatAlgebra) -> Value {
    json!([alg.a().to_string(), alg.b().to_string()])
}

pub fn run(cmd: Cmd, format: Option<Format>) -> CmdResult {
    match cmd {
        Cmd::Hilbert { a, b, p } => hilbert(a, b, &p, format),
        Cmd::Disc { a, b } => disc(a, b),
        Cmd::Splits { alg, d } => {
            let alg = algebra(&alg)?;
            let l = field(d)?;
            let s = splits(&l, &alg)?;
            Ok(Output::Record(vec![
                ("algebra", algebra_params(&alg)),
                ("d", int(d)),
                ("Delta_L", int(l.disc())),
                ("splits", json!(s)),
            ]))
        }
        Cmd::Theta { disc, d, theta } => theta_cmd(disc, d, theta),
        Cmd::Idempotent { alg, g } => idempotent(&algebra(&alg)?, g),
        Cmd::Identities { alg, g } => identities(&algebra(&alg)?, g),
        Cmd::Order { alg } => order(&algebra(&alg)?),
        Cmd::Embed { alg, g, d, c } => embed(&alg, g, d, c),
        Cmd::Classgroup { d, c, discriminant } => classgroup(d, c, discriminant),
        Cmd::Idealset { d, c, gamma, disc } => idealset(d, c, gamma, disc),
        Cmd::Bounds { c, d, m, g } => bounds(c, d, m, g),
        Cmd::Tabulate { disc, d_max, c_max } => tabulate(&disc, d_max, c_max),
    }
}

fn hilbert(a: i64, b: i64, p: &str, format: Option<Format>) -> CmdResult {
    let symbol = if matches!(p, "inf" | "infinity" | "oo") {
        hilbert_infinity(a, b)
    } else {
        let p: u64 = p.parse().map_err(|_| Failure::Usage(format!("invalid place '{p}'")))?;
        if !arith::is_prime(p) {
            return Err(Failure::Domain(format!("{p} is not prime")));
        }
        hilbert_formula(a, b, p)?
    };
    Ok(match format {
        None => Output::Bare(symbol.to_string()),
        Some(_) => Output::Record(vec![
            ("a", int(a)),
            ("b", int(b)),
            ("p", Value::String(p.to_string())),
            ("symbol", int(symbol)),
        ]),
    })
}

fn disc(a: Rational, b: Rational) -> CmdResult {
    let alg = QuatAlgebra::new(a, b)?;
    let r = ramification_set(&alg)?;
    Ok(Output::Record(vec![
        ("algebra", algebra_params(&alg)),
        ("disc", int(r.discriminant())),
        ("ramified_primes", ints(&r.primes)),
        ("ramified_at_infinity", json!(r.includes_infinity)),
        ("indefinite", json!(!r.includes_infinity)),
    ]))
}

fn theta_cmd(disc: u64, d: u64, theta: Option<i64>) -> CmdResult {
    let l = field(d)?;
    if let Some(theta) = theta {
        let check = check_theta(theta, disc, &l)?;
        let conditions: Vec<Value> = check
            .conditions
            .iter()
            .map(|c| json!({"name": c.name, "holds": c.holds, "detail": c.detail}))
            .collect();
        return Ok(Output::Record(vec![
            ("disc", int(disc)),
            ("d", int(d)),
            ("theta", int(theta)),
            ("m0", int(check.m0)),
            ("m", check.m.map_or(Value::Null, int)),
            ("presents", json!(check.verdict)),
            ("fast_path", json!(check.fast_path)),
            ("disagreement", json!(check.disagrees())),
            ("conditions", Value::Array(conditions)),
        ]));
    }
    let pair = find_theta_pair(disc, &l)?;
    let verified = presents(pair.theta1, disc, &l)? && presents(pair.theta2, disc, &l)?;
    Ok(Output::Record(vec![
        ("disc", int(disc)),
        ("d", int(d)),
        ("Delta_L", int(pair.disc_l)),
        ("m0", int(pair.m0)),
        ("s", int(pair.s)),
        ("m_pair", ints([pair.m1, pair.m2])),
        ("theta_pair", ints([pair.theta1, pair.theta2])),
        ("verified", json!(verified)),
    ]))
}

fn idempotent(alg: &Arc<QuatAlgebra>, g: [Rational; 4]) -> CmdResult {
    let emb = embedding_from_element(&alg.element(g))?;
    let t = TensorAlgebra::new(Arc::clone(alg), emb.delta().clone())?;
    let e = idempotent_from_embedding(&t, &emb)?;
    let back = embedding_from_idempotent(&e)?;
    let x = e.element();
    Ok(Output::Record(vec![
        ("algebra", algebra_params(alg)),
        ("delta", rational(emb.delta())),
        ("e_a", coords(x.a())),
        ("e_b", coords(x.b())),
        ("trace", lscalar(&ttrace(x))),
        ("norm", lscalar(&tnorm(x))),
        ("recovered_g", coords(back.image())),
        ("round_trip", json!(back == emb)),
    ]))
}

fn identities(alg: &Arc<QuatAlgebra>, g: [Rational; 4]) -> CmdResult {
    let emb = embedding_from_element(&alg.element(g))?;
    let t = TensorAlgebra::new(Arc::clone(alg), emb.delta().clone())?;
    let e = idempotent_from_embedding(&t, &emb)?;
    let ids = verify_iota_identities(&emb, &e)?;
    let u = find_u(&emb)?;
    Ok(Output::Record(vec![
        ("algebra", algebra_params(alg)),
        ("g", coords(emb.image())),
        ("ebar_absorbs", json!(ids.ebar_absorbs)),
        ("e_iota_e", json!(ids.e_iota_e)),
        ("e_iota_ebar", json!(ids.e_iota_ebar)),
        ("difference", json!(ids.difference)),
        ("ebar_iota_e_vanishes", json!(ids.ebar_iota_e_vanishes)),
        ("all", json!(ids.all())),
        ("u", coords(&u)),
        ("u_conjugates_e_to_complement", json!(u_conjugates_to_complement(&e, &u)?)),
    ]))
}

fn basis_value(o: &QuatOrder) -> Value {
    Value::Array(o.basis().iter().map(coords).collect())
}

fn order(alg: &Arc<QuatAlgebra>) -> CmdResult {
    let standard = QuatOrder::standard(alg)?;
    let maximal = maximal_order(alg)?;
    let rd_std = reduced_discriminant(&standard)?;
    let rd = reduced_discriminant(&maximal)?;
    Ok(Output::Record(vec![
        ("algebra", algebra_params(alg)),
        ("disc", int(ramification_set(alg)?.discriminant())),
        ("standard_reduced_discriminant", int(rd_std)),
        ("index", int(rd_std / rd)),
        ("maximal_basis", basis_value(&maximal)),
        ("reduced_discriminant", int(rd)),
        ("maximal", json!(quatcm_core::orders::is_maximal(&maximal)?)),
    ]))
}

fn embed(args: &AlgebraArgs, g: Option<[Rational; 4]>, d: Option<u64>, c: Option<u64>) -> CmdResult {
    let alg = algebra(args)?;
    let disc = ramification_set(&alg)?.discriminant();
    match (g, d, c) {
        (Some(g), None, None) => {
            let emb = embedding_from_element(&alg.element(g))?;
            let l = ImagQuadField::from_square(emb.delta())?;
            let o = maximal_order(&alg)?;
            let cond = embedding_conductor(&o, &emb, &l)?;
            Ok(Output::Record(vec![
                ("algebra", algebra_params(&alg)),
                ("disc", int(disc)),
                ("g", coords(emb.image())),
                ("d", int(l.d())),
                ("Delta_L", int(l.disc())),
                ("conductor", int(cond)),
                ("quad_order_discriminant", int(QuadOrder::new(l, cond)?.discriminant())),
                ("optimal_embedding_exists", json!(optimal_embedding_exists(disc, &l, cond))),
            ]))
        }
        (None, Some(d), Some(c)) => {
            let l = field(d)?;
            Ok(Output::Record(vec![
                ("disc", int(disc)),
                ("d", int(d)),
                ("c", int(c)),
                ("splits", json!(quatcm_core::localsym::splits_disc(&l, disc))),
                ("optimal_embedding_exists", json!(optimal_embedding_exists(disc, &l, c))),
            ]))
        }
        _ => Err(Failure::Usage("give either --g, or both --d and --c".into())),
    }
}

fn classgroup(d: Option<u64>, c: u64, discriminant: Option<i64>) -> CmdResult {
    let (disc, forms) = match (d, discriminant) {
        (Some(d), None) => {
            let group = class_group(&QuadOrder::new(field(d)?, c)?)?;
            (group.discriminant, group.elements)
        }
        (None, Some(disc)) => (disc, reduced_forms(disc)?),
        _ => return Err(Failure::Usage("give either --d or --discriminant".into())),
    };
    let rows = forms
        .iter()
        .map(|f| vec![Some(disc.to_string()), Some(f.a.to_string()), Some(f.b.to_string()), Some(f.c.to_string())])
        .collect();
    Ok(Output::Table { columns: vec!["discriminant", "a", "b", "c"], rows })
}

fn idealset(d: u64, c: u64, gamma: Option<Vec<u64>>, disc: Option<u64>) -> CmdResult {
    let l = field(d)?;
    if let (Some(gamma), Some(disc)) = (gamma, disc) {
        let count = count_a_dc(disc, &l, c, &gamma)?;
        return Ok(Output::Record(vec![
            ("disc", int(disc)),
            ("d", int(d)),
            ("c", int(c)),
            ("gamma", ints(&gamma)),
            ("count", int(count)),
        ]));
    }
    let set = ideal_class_set(&QuadOrder::new(l, c)?)?;
    let rows = set
        .strata
        .iter()
        .flat_map(|(cp, g)| {
            g.elements.iter().map(move |f| {
                vec![
                    Some(cp.to_string()),
                    Some(g.discriminant.to_string()),
                    Some(f.a.to_string()),
                    Some(f.b.to_string()),
                    Some(f.c.to_string()),
                ]
            })
        })
        .collect();
    Ok(Output::Table { columns: vec!["conductor", "discriminant", "a", "b", "c"], rows })
}

fn bounds(c: u64, d: u64, m: Option<u64>, g: u32) -> CmdResult {
    if c == 0 || d == 0 || m == Some(0) {
        return Err(Failure::Domain("c, d and m must be positive".into()));
    }
    let n = norm_alpha(c, d);
    let general = degree_bound_general(g, &qi(n as i64))?;
    Ok(Output::Record(vec![
        ("c", int(c)),
        ("d", int(d)),
        ("g", int(g)),
        ("norm_alpha", int(n)),
        ("bound_general", rational(&general)),
        ("bound_surface", int(degree_bound_surface(c, d))),
        ("bound_tilde", m.map_or(Value::Null, |m| int(degree_bound_tilde(c, d, m)))),
    ]))
}

fn tabulate(discs: &[u64], d_max: u64, c_max: u64) -> CmdResult {
    let mut grid = Vec::new();
    for &disc in discs {
        for d in 1..=d_max {
            if !arith::is_squarefree(d as i64) {
                continue;
            }
            for c in 1..=c_max {
                grid.push((disc, d, c));
            }
        }
    }
    let rows: Vec<Result<Vec<Option<String>>, Failure>> = grid
        .par_iter()
        .map(|&(disc, d, c)| {
            let r = assemble_report(disc, &field(d)?, c)?;
            let s = |x: &dyn ToString| Some(x.to_string());
            Ok(vec![
                s(&r.disc),
                s(&r.d),
                s(&r.disc_l),
                s(&r.splits),
                s(&r.m0),
                r.s.map(|x| x.to_string()),
                r.theta1.map(|x| x.to_string()),
                r.theta2.map(|x| x.to_string()),
                r.iso_flag.map(|x| x.to_string()),
                s(&r.opt_embed_exists),
                s(&r.h),
                s(&r.id_set_size),
                s(&r.bound_general),
                s(&r.bound_surface),
                r.bound_tilde.map(|x| x.to_string()),
            ])
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(Output::Table { columns: TABLE_COLUMNS.to_vec(), rows })
}
