//! Alpha expressions: decimal/rational/surd literals plus the recurring
//! symbolic choices (`fmax`, `fix:i`, `astar:d`, `gap:lower`, `gap:upper`).

use nexp::arrangement::{alpha_star, fixed_point};
use nexp::gap_analysis::four_cyl_gap_params;
use nexp::numerics::{parse_value, Precision, Surd, Value};

use crate::CliError;

#[derive(Debug, Clone)]
pub enum AlphaExpr {
    Literal(String),
    FMax,
    Fix(i64),
    AStar(i64),
    GapLower,
    GapUpper,
}

impl AlphaExpr {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("fmax") {
            return Ok(AlphaExpr::FMax);
        }
        if let Some(rest) = t.strip_prefix("fix:") {
            let i: i64 = rest
                .parse()
                .map_err(|_| CliError::usage(format!("invalid fixed-point index in {t:?}")))?;
            return Ok(AlphaExpr::Fix(i));
        }
        if let Some(rest) = t.strip_prefix("astar:") {
            let d: i64 = rest
                .parse()
                .map_err(|_| CliError::usage(format!("invalid digit in {t:?}")))?;
            return Ok(AlphaExpr::AStar(d));
        }
        match t {
            "gap:lower" => Ok(AlphaExpr::GapLower),
            "gap:upper" => Ok(AlphaExpr::GapUpper),
            _ => Ok(AlphaExpr::Literal(t.to_string())),
        }
    }

    /// Resolve against `n` at the working precision. Symbolic forms resolve
    /// to exact surds.
    pub fn resolve(&self, n: u64, prec: Precision) -> Result<Value, CliError> {
        match self {
            AlphaExpr::Literal(text) => {
                parse_value(text, prec).map_err(|e| CliError::usage(format!("alpha: {e}")))
            }
            AlphaExpr::FMax => {
                let s = Surd::sqrt_int(n)
                    .map_err(|e| CliError::usage(e.to_string()))?
                    .sub_int(1);
                Ok(Value::Exact(s))
            }
            AlphaExpr::Fix(i) => {
                if *i < 1 {
                    return Err(CliError::usage("fix:i needs i >= 1"));
                }
                Ok(Value::Exact(fixed_point(n, *i)))
            }
            AlphaExpr::AStar(d) => Ok(Value::Exact(
                alpha_star(n, *d).map_err(|e| CliError::usage(e.to_string()))?,
            )),
            AlphaExpr::GapLower | AlphaExpr::GapUpper => {
                let gp = four_cyl_gap_params(n)
                    .map_err(|e| CliError::usage(e.to_string()))?
                    .ok_or_else(|| {
                        CliError::usage(format!("gap bracket undefined for N={n}"))
                    })?;
                Ok(Value::Exact(match self {
                    AlphaExpr::GapLower => gp.alpha_l,
                    _ => gp.alpha_u,
                }))
            }
        }
    }
}
