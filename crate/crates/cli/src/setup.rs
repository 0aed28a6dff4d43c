//! Turns flags into a field, a space, a variety and a budget.

use std::sync::Arc;

use qherm_core::gf::prime_power;
use qherm_core::variety::{
    build_b, build_cone_f, build_hermitian, build_quasi_hermitian, find_params, validate_params, BParams,
    ValidationReport, Variety,
};
use qherm_core::{Budget, Error, FieldCtx, FieldElem, ProjSpace};

use crate::cli::{Opts, VarietyArg};
use crate::error::{CliError, CliResult};

pub fn budget(opts: &Opts) -> Budget {
    opts.budget.map_or_else(Budget::default, Budget::new)
}

/// `GF(q^2)`, with the Conway modulus or the one given by `modulus`.
pub fn field(q: u32, modulus: Option<&str>) -> CliResult<FieldCtx> {
    let Some(text) = modulus else {
        return Ok(FieldCtx::quadratic_over(q)?);
    };
    let (p, h) = prime_power(q).ok_or(Error::NotPrime(q))?;
    let coeffs = parse_list(text, "--modulus")?;
    Ok(FieldCtx::with_modulus(p, 2 * h, &coeffs)?)
}

pub fn space(opts: &Opts) -> CliResult<Arc<ProjSpace>> {
    let f = field(opts.q, opts.modulus.as_deref())?;
    Ok(Arc::new(ProjSpace::new(Arc::new(f), opts.r)?))
}

pub fn parse_list(text: &str, flag: &str) -> CliResult<Vec<u32>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| CliError::Usage(format!("{flag}: {:?} is not a non-negative integer", t.trim())))
        })
        .collect()
}

/// A built variety together with how its parameters were chosen.
pub struct Built {
    pub variety: Variety,
    pub params: Option<BParams>,
    pub validation: Option<ValidationReport>,
    pub auto_params: bool,
}

fn params(space: &ProjSpace, opts: &Opts) -> CliResult<(BParams, ValidationReport, bool)> {
    let (p, auto) = match (opts.alpha, opts.beta) {
        (Some(a), Some(b)) => {
            let f = space.field();
            let p = BParams {
                r: opts.r,
                alpha: f.elem(a)?,
                beta: f.elem(b)?,
            };
            (p, false)
        }
        (None, None) => (find_params(space)?, true),
        _ => return Err(CliError::Usage("--alpha and --beta go together".into())),
    };
    let rep = validate_params(space, &p)?;
    if !rep.passed {
        return Err(Error::InvalidParams(rep.to_string()).into());
    }
    Ok((p, rep, auto))
}

pub fn build(space: &Arc<ProjSpace>, opts: &Opts, budget: &Budget) -> CliResult<Built> {
    let plain = |variety| Built {
        variety,
        params: None,
        validation: None,
        auto_params: false,
    };
    Ok(match opts.variety {
        VarietyArg::Hermitian => plain(build_hermitian(space, budget)?),
        VarietyArg::ConeF => plain(build_cone_f(space, budget)?),
        VarietyArg::B | VarietyArg::QuasiHermitian => {
            let (p, rep, auto) = params(space, opts)?;
            let variety = if opts.variety == VarietyArg::B {
                build_b(space, &p, budget)?
            } else {
                build_quasi_hermitian(space, &p, budget)?
            };
            Built {
                variety,
                params: Some(p),
                validation: Some(rep),
                auto_params: auto,
            }
        }
    })
}

/// `--p0` if given and on the variety, else its first point.
pub fn p0(v: &Variety, opts: &Opts) -> CliResult<u32> {
    match opts.p0 {
        Some(i) if v.contains(i) => Ok(i),
        Some(i) => Err(Error::NotOnVariety(i).into()),
        None => v
            .points()
            .first()
            .copied()
            .ok_or_else(|| CliError::Usage("the variety is empty".into())),
    }
}

pub fn elem(space: &ProjSpace, value: u32) -> CliResult<FieldElem> {
    Ok(space.field().elem(value)?)
}
