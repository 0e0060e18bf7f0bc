//! Constructed operators and waves next to their reference forms.

use weyl_forge_exact::{parse_ratfun, RationalFunction, Var};

use crate::airyring::{build_darboux_operator, DarbouxFactor, SubspaceSpec};
use crate::bispectral::{dress, DressedWave};
use crate::concomitant::WronskianSign;
use crate::error::{Error, Result};
use crate::weylops::{parse_operator, DiffOperator, DividedForm};

fn rf(s: &str) -> Result<RationalFunction> {
    parse_ratfun(s).map_err(Error::from)
}

/// `α = (0, 1)` at the root `s1`: the rank-one factorization of `(L − s1)²`.
pub fn level_one_spec(s1: &RationalFunction) -> SubspaceSpec {
    SubspaceSpec {
        roots: vec![(s1.clone(), 1)],
        pairs: vec![(0, vec![RationalFunction::zero(), RationalFunction::one()])],
    }
}

/// The one-parameter rank-two family at the root 0 (`α13 = α23 = α22 = 1`,
/// `α12 = 0`, `α21 = α11`, `α_m0 = −α_m1 α_m2 / 3`).
pub fn level_two_spec(a11: &RationalFunction) -> SubspaceSpec {
    let third = RationalFunction::constant(weyl_forge_exact::rat(-1, 3));
    let (zero, one) = (RationalFunction::zero(), RationalFunction::one());
    SubspaceSpec {
        roots: vec![(zero.clone(), 2)],
        pairs: vec![
            (0, vec![zero, a11.clone(), RationalFunction::zero(), one.clone()]),
            (0, vec![a11 * &third, a11.clone(), one.clone(), one]),
        ],
    }
}

/// Which wave a computation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    Airy,
    One,
    Two,
}

impl Level {
    pub fn parse(s: &str) -> Option<Level> {
        match s {
            "airy" => Some(Level::Airy),
            "one" => Some(Level::One),
            "two" => Some(Level::Two),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::Airy => "airy",
            Level::One => "one",
            Level::Two => "two",
        }
    }

    /// The subspace data at root `s1` (level two with `α11 = 0`); `None`
    /// for the undressed Airy wave.
    pub fn spec_at(self, s1: &RationalFunction) -> Option<SubspaceSpec> {
        match self {
            Level::Airy => None,
            Level::One => Some(level_one_spec(s1)),
            Level::Two => {
                let mut spec = level_two_spec(&RationalFunction::zero());
                spec.roots[0].0 = s1.clone();
                Some(spec)
            }
        }
    }

    pub fn wave_at(self, s1: &RationalFunction) -> Result<DressedWave> {
        match self.spec_at(s1) {
            None => Ok(DressedWave::airy()),
            Some(spec) => dress(&build_darboux_operator(&spec, WronskianSign::default())?),
        }
    }

    /// The wave at `s1 = 0`.
    pub fn wave(self) -> Result<DressedWave> {
        self.wave_at(&RationalFunction::zero())
    }

    /// Template factor `f` in `Σ ∂^k a_k f^k ∂^k`.
    pub fn factor(self, t1: &RationalFunction) -> RationalFunction {
        let z = RationalFunction::var(Var::z());
        match self {
            Level::One => &z - t1,
            Level::Airy | Level::Two => t1 - &z,
        }
    }

    /// Default endpoints: symbolic for the Airy and level-one waves,
    /// `t1 = t2 = 1` for level two.
    pub fn default_endpoints(self) -> (RationalFunction, RationalFunction) {
        match self {
            Level::Airy | Level::One => (RationalFunction::var(Var::new("t1")), RationalFunction::var(Var::new("t2"))),
            Level::Two => (RationalFunction::one(), RationalFunction::one()),
        }
    }

    /// Orders of the reference commuting operators.
    pub fn reference_orders(self) -> &'static [usize] {
        match self {
            Level::Airy => &[2],
            Level::One => &[4, 6],
            Level::Two => &[10, 12],
        }
    }
}

/// Constructed values with the reference forms alongside.
#[derive(Clone, Debug)]
pub struct Catalog {
    /// `∂z(t1−z)∂z + (t2−t1)z + z²`.
    pub s_ai: DiffOperator,
    /// `∂x(t2−x)∂x + (t1−t2)x + x²`.
    pub s_ai_preimage: DiffOperator,
    /// Built from [`level_one_spec`] with symbolic `s1`.
    pub p1: DarbouxFactor,
    pub p1_reference: DiffOperator,
    /// Built from `p1`.
    pub psi1: DressedWave,
    pub psi1_reference: DressedWave,
    /// Divided forms with factor `z − t1`, sandwich `1/z`.
    pub s1: DividedForm,
    pub s1_tilde: DividedForm,
    /// Built from [`level_two_spec`] with symbolic `a11`.
    pub p2_family: DarbouxFactor,
    /// Reference family, including its first-order constant `−16`.
    pub p2_family_reference: DiffOperator,
    pub p2: DarbouxFactor,
    pub p2_reference: DiffOperator,
    pub psi2: DressedWave,
    /// The reference wave read with `z` in place of its stray `w`.
    pub psi2_reference: DressedWave,
    /// Divided forms with factor `1 − z`, sandwich `1/z²` (`t1 = t2 = 1`).
    pub s2: DividedForm,
    /// Two reference coefficients with an unclosed parenthesis are read
    /// as closing at the end of their line.
    pub s2_tilde: DividedForm,
}

fn forms(s: u32, factor: &str, a: &[&str]) -> Result<DividedForm> {
    let a = a.iter().map(|c| rf(c)).collect::<Result<Vec<_>>>()?;
    Ok(DividedForm::new(Var::z(), s, rf(factor)?, a))
}

pub fn catalog() -> Result<Catalog> {
    let (x, z) = (Var::x(), Var::z());
    let sign = WronskianSign::default();
    let s1v = rf("s1")?;
    let p1 = build_darboux_operator(&level_one_spec(&s1v), sign)?;
    let psi1 = dress(&p1)?;
    let p2_family = build_darboux_operator(&level_two_spec(&rf("a11")?), sign)?;
    let p2 = build_darboux_operator(&level_two_spec(&RationalFunction::zero()), sign)?;
    let psi2 = dress(&p2)?;
    Ok(Catalog {
        s_ai: parse_operator("D*(t1 - z)*D + (t2 - t1)*z + z^2", z)?,
        s_ai_preimage: parse_operator("D*(t2 - x)*D + (t1 - t2)*x + x^2", x)?,
        p1,
        p1_reference: parse_operator("(x+s1)*D^2 - D - (x+s1)^2", x)?,
        psi1,
        psi1_reference: DressedWave::from_parts(rf("1")?, rf("-1/((x+s1)*(z-s1))")?),
        s1: forms(
            1,
            "z - t1",
            &[
                "z^3*(z^3 + 2*(t2-t1)*z^2 + (t2-t1)^2*z - 8) + (t1+t2)*z^2/3",
                "-2*(z^4 + (t2-t1)*z^3 - 3*t1)",
                "z^2",
            ],
        )?,
        s1_tilde: forms(
            1,
            "z - t1",
            &[
                "-z^8 - 3*(t2-t1)*z^7 - 3*(t2-t1)^2*z^6 - ((t2-t1)^3 - 32)*z^5 \
                 + (42*t2-63*t1)*z^4 + (36*t1^2-48*t1*t2+12*t2^2)*z^3 + t1*t2*(t1+t2)*z^2 + 12*t1^2 - 6*t1*t2",
                "3*(z^6 + 2*(t2-t1)*z^5 + (t2-t1)^2*z^4 - 10*z^3 + (5*t1-4*t2)*z^2 - 3*t1*(t2-t1)*z)",
                "-3*(z^4 + (t2-t1)*z^3 - 4*t1)",
                "z^2",
            ],
        )?,
        p2_family,
        p2_family_reference: parse_operator(
            "(x^4 - 4*x^3*a11 + 10/3*x^2*a11^2 + (4/3*a11^3 + 4)*x + 1/9*a11^4 - 8*a11)*D^4 \
             + (-4*x^3 + 12*x^2*a11 - 20/3*a11^2*x - 4/3*a11^3 - 4)*D^3 \
             + (-2*x^5 + 8*x^4*a11 - 20/3*a11^2*x^3 - (8/3*a11^3 + 2)*x^2 - (2/9*a11^4 - 4*a11)*x + 10/3*a11^2)*D^2 \
             + (2*x^4 - 4*x^3*a11 - 4/3*x*a11^3 - 16 - 2/9*a11^4 + 36*a11)*D \
             + x^6 - 4*x^5*a11 + 10/3*x^4*a11^2 + (4/3*a11^3 + 8)*x^3 + (1/9*a11^4 - 22*a11)*x^2 + 16/3*x*a11^2 + 2*a11^3 + 16",
            x,
        )?,
        p2,
        p2_reference: parse_operator(
            "x*(x^3+4)*D^4 - 4*(x^3+1)*D^3 - 2*x^2*(x^3+1)*D^2 + 2*x*(x^3-8)*D + x^6 + 8*x^3 + 16",
            x,
        )?,
        psi2,
        psi2_reference: DressedWave::from_parts(
            rf("1 + 6*(x^3 + x^2*z + 2)/(x*(x^3+4)*z^2)")?,
            rf("-4*(x^3*z + 3*x + z)/(x*(x^3+4)*z^2)")?,
        ),
        s2: forms(
            2,
            "1 - z",
            &[
                "z^14 - 200*z^11 + 170*z^10 + 5640*z^8 - 7360*z^7 + 2160*z^6 - 11520*z^5 - 2880*z + 4320",
                "5*z^12 - 580*z^9 + 380*z^8 + 6240*z^6 - 3700*z^5 - 960*z^2 - 9600*z + 4800",
                "10*z^10 - 560*z^7 + 180*z^6 + 960*z^4 + 1800*z^3 + 300*z^2",
                "10*z^8 - 180*z^5 - 100*z^4 - 420*z + 1260",
                "5*z^6 - 70*z^2",
                "z^4",
            ],
        )?,
        s2_tilde: forms(
            2,
            "1 - z",
            &[
                "z^16 - 340*z^13 + 504*z^12 + 21040*z^10 - 52200*z^9 + 28812*z^8 \
                 - 192000*z^7 + 490464*z^6 - 328320*z^5 - 201600*z + 130464",
                "6*(z^14 - 220*z^11 + 300*z^10 + 7000*z^8 - 14212*z^7 + 5148*z^6 \
                 - 16800*z^5 + 13568*z^4 + 13568*z^3 + 2368*z^2 - 6240*z + 12480)",
                "3*(5*z^12 - 640*z^9 + 760*z^8 + 7800*z^6 - 8792*z^5 - 2996*z^4 - 3120*z^2 - 36000*z + 50400)",
                "4*z^2*(5*z^8 - 310*z^5 + 270*z^4 + 600*z^2 + 1566*z - 2268)",
                "3*(5*z^8 - 100*z^5 - 224*z + 784)",
                "6*(z-2)*z^2*(z+2)*(z^2+4)",
                "z^4",
            ],
        )?,
    })
}
