//! JSON form of operators: `{"form": "theta" | "d", "coeffs": [[..], ..]}`
//! with ascending coefficient lists of `"num/den"` strings.

use serde::{Deserialize, Serialize};

use super::{DOperator, ThetaOperator};
use crate::arith::{parse_rational, rational_string, Polynomial, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorForm {
    Theta,
    D,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub form: OperatorForm,
    pub coeffs: Vec<Vec<String>>,
}

fn rows(ps: &[Polynomial<Rational>]) -> Vec<Vec<String>> {
    ps.iter().map(|p| p.coeffs().iter().map(rational_string).collect()).collect()
}

impl OperatorJson {
    pub fn from_theta(op: &ThetaOperator<Rational>) -> Self {
        OperatorJson { form: OperatorForm::Theta, coeffs: rows(op.coeffs()) }
    }

    pub fn from_d(op: &DOperator<Rational>) -> Self {
        OperatorJson { form: OperatorForm::D, coeffs: rows(op.coeffs()) }
    }

    fn polys(&self) -> Result<Vec<Polynomial<Rational>>> {
        self.coeffs
            .iter()
            .map(|r| Ok(Polynomial::new(r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?)))
            .collect()
    }

    /// The operator in Θ-form, converting from derivative form if needed.
    pub fn to_theta(&self) -> Result<ThetaOperator<Rational>> {
        let ps = self.polys()?;
        let op = match self.form {
            OperatorForm::Theta => ThetaOperator::new(ps),
            OperatorForm::D => DOperator::new(ps).to_theta(),
        };
        if op.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(op)
    }

    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("operator JSON: {e}")))
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("operator JSON serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_roundtrip() {
        let op = ThetaOperator::parse("Θ^2 - 16t(Θ+1/2)^2").unwrap();
        let j = OperatorJson::from_theta(&op);
        assert_eq!(j.coeffs[1], vec!["-4", "-16", "-16"]);
        let back = OperatorJson::parse(&j.to_string_pretty()).unwrap().to_theta().unwrap();
        assert_eq!(back, op);
    }

    #[test]
    fn d_form_converts() {
        let op = ThetaOperator::parse("Θ^2 - 16t(Θ+1/2)^2").unwrap();
        let j = OperatorJson::from_d(&op.to_d());
        assert!(j.to_theta().unwrap().same_as(&op));
    }

    #[test]
    fn malformed() {
        assert!(OperatorJson::parse("{\"form\": \"theta\"}").is_err());
        assert!(OperatorJson::parse("{\"form\": \"theta\", \"coeffs\": [[\"1/0\"]]}").unwrap().to_theta().is_err());
        assert!(OperatorJson::parse("{\"form\": \"theta\", \"coeffs\": []}").unwrap().to_theta().is_err());
    }
}
