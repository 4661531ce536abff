use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

thread_local! {
    static BUILTINS: meval::Context<'static> = meval::Context::new();
}

/// Arithmetic expression in the variables `t`, `x`, `y`.
#[derive(Clone)]
pub struct Expression {
    source: String,
    expr: meval::Expr,
}

impl Expression {
    pub fn parse(source: &str) -> Result<Self, String> {
        let expr: meval::Expr = source.parse().map_err(|e: meval::Error| e.to_string())?;
        let e = Self { source: source.to_string(), expr };
        // Reject unknown names and wrong arities up front.
        e.try_eval(0.0, 0.0, 0.0)?;
        Ok(e)
    }

    pub fn constant(v: f64) -> Self {
        Self::parse(&format!("{v:?}")).expect("numeric literal")
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    fn try_eval(&self, t: f64, x: f64, y: f64) -> Result<f64, String> {
        BUILTINS.with(|ctx| {
            self.expr.eval_with_context(([("t", t), ("x", x), ("y", y)], ctx)).map_err(|e| e.to_string())
        })
    }

    /// True when the expression uses none of `t`, `x`, `y`.
    pub fn is_constant(&self) -> bool {
        BUILTINS.with(|ctx| self.expr.eval_with_context(ctx).is_ok())
    }

    pub fn eval(&self, t: f64, x: f64, y: f64) -> f64 {
        self.try_eval(t, x, y).unwrap_or(f64::NAN)
    }
}

impl PartialEq for Expression {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

impl fmt::Debug for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expression({:?})", self.source)
    }
}

impl Serialize for Expression {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}

/// Accepts a string or a bare number.
#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum RawExpression {
    Text(String),
    Number(f64),
}

impl RawExpression {
    pub(crate) fn compile(self) -> Result<Expression, String> {
        match self {
            RawExpression::Text(s) => Expression::parse(&s),
            RawExpression::Number(v) => Ok(Expression::constant(v)),
        }
    }
}

impl<'de> Deserialize<'de> for Expression {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        RawExpression::deserialize(d)?.compile().map_err(serde::de::Error::custom)
    }
}
