use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};

use super::{GridCurve, TradeoffCurve};
use crate::catalog::location_cdf_by_name;
use crate::error::{FdpError, Result};

impl TradeoffCurve {
    /// Grids become `{"alpha": [...], "beta": [...]}`; everything else
    /// `{"family": name, "params": {...}}`, nesting operands as curves.
    pub fn to_json(&self) -> Value {
        use TradeoffCurve::*;
        let (family, params) = match self {
            Grid(g) => return json!({ "alpha": g.alpha(), "beta": g.beta() }),
            Identity => ("identity", json!({})),
            Gdp { mu } => ("gdp", json!({ "mu": mu })),
            EpsDelta { eps, delta } => ("eps_delta", json!({ "eps": eps, "delta": delta })),
            Laplace { mu } => ("laplace", json!({ "mu": mu })),
            PointMassDelta { delta } => ("point_mass_delta", json!({ "delta": delta })),
            Location { cdf, shift } => ("location", json!({ "cdf": cdf.name(), "shift": shift })),
            Mixture { base, weight } => ("mixture", json!({ "base": base.to_json(), "weight": weight })),
            Inverse(base) => ("inverse", json!({ "base": base.to_json() })),
            Max(a, b) => ("max", json!({ "first": a.to_json(), "second": b.to_json() })),
            Envelope { base, x_bar, y_bar } => (
                "envelope",
                json!({ "base": base.to_json(), "x_bar": x_bar, "y_bar": y_bar }),
            ),
            DeltaScaled { base, delta } => ("delta_scaled", json!({ "base": base.to_json(), "delta": delta })),
            GdpLowerBracket { mu, gamma } => ("gdp_lower_bracket", json!({ "mu": mu, "gamma": gamma })),
        };
        json!({ "family": family, "params": params })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| FdpError::Serialization("curve must be a JSON object".into()))?;
        if obj.contains_key("alpha") || obj.contains_key("beta") {
            let alpha = number_array(obj, "alpha")?;
            let beta = number_array(obj, "beta")?;
            if alpha.len() != beta.len() {
                return Err(FdpError::Serialization(format!(
                    "alpha has {} entries but beta has {}",
                    alpha.len(),
                    beta.len()
                )));
            }
            let pts: Vec<(f64, f64)> = alpha.into_iter().zip(beta).collect();
            return GridCurve::from_points(&pts, false).map(TradeoffCurve::Grid);
        }
        let family = obj
            .get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| FdpError::Serialization("missing \"family\"".into()))?;
        let empty = Map::new();
        let params = match obj.get("params") {
            Some(Value::Object(m)) => m,
            None => &empty,
            Some(_) => return Err(FdpError::Serialization("\"params\" must be an object".into())),
        };
        let num = |k: &str| number(params, k);
        let sub = |k: &str| -> Result<Arc<TradeoffCurve>> {
            let v = params
                .get(k)
                .ok_or_else(|| FdpError::Serialization(format!("missing parameter \"{k}\"")))?;
            Ok(Arc::new(TradeoffCurve::from_json(v)?))
        };
        use crate::catalog;
        Ok(match family {
            "identity" => TradeoffCurve::Identity,
            "gdp" => catalog::gdp(num("mu")?)?,
            "eps_delta" => catalog::eps_delta(num("eps")?, num("delta")?)?,
            "laplace" => catalog::laplace(num("mu")?)?,
            "point_mass_delta" => catalog::point_mass_delta(num("delta")?)?,
            "location" => {
                let name = params
                    .get("cdf")
                    .and_then(Value::as_str)
                    .ok_or_else(|| FdpError::Serialization("missing parameter \"cdf\"".into()))?;
                let cdf = location_cdf_by_name(name)
                    .ok_or_else(|| FdpError::Serialization(format!("unknown location family {name:?}")))?;
                catalog::location_family(cdf, num("shift")?)?
            }
            "mixture" => TradeoffCurve::Mixture {
                base: sub("base")?,
                weight: num("weight")?,
            },
            "inverse" => TradeoffCurve::Inverse(sub("base")?),
            "max" => TradeoffCurve::Max(sub("first")?, sub("second")?),
            "envelope" => TradeoffCurve::Envelope {
                base: sub("base")?,
                x_bar: num("x_bar")?,
                y_bar: num("y_bar")?,
            },
            "delta_scaled" => TradeoffCurve::DeltaScaled {
                base: sub("base")?,
                delta: num("delta")?,
            },
            "gdp_lower_bracket" => TradeoffCurve::GdpLowerBracket {
                mu: num("mu")?,
                gamma: num("gamma")?,
            },
            other => return Err(FdpError::Serialization(format!("unknown curve family {other:?}"))),
        })
    }
}

fn number(obj: &Map<String, Value>, key: &str) -> Result<f64> {
    obj.get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| FdpError::Serialization(format!("missing numeric parameter \"{key}\"")))
}

fn number_array(obj: &Map<String, Value>, key: &str) -> Result<Vec<f64>> {
    let arr = obj
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| FdpError::Serialization(format!("\"{key}\" must be an array")))?;
    arr.iter()
        .map(|v| {
            v.as_f64()
                .ok_or_else(|| FdpError::Serialization(format!("non-numeric entry in \"{key}\"")))
        })
        .collect()
}

impl Serialize for TradeoffCurve {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TradeoffCurve {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        TradeoffCurve::from_json(&v).map_err(D::Error::custom)
    }
}

/// Two-column `alpha,beta` CSV with a header row, full precision.
pub fn grid_to_csv(grid: &GridCurve) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["alpha", "beta"])?;
    for (a, b) in grid.points() {
        w.write_record([a.to_string(), b.to_string()])?;
    }
    let bytes = w.into_inner().map_err(|e| FdpError::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| FdpError::Serialization(e.to_string()))
}

/// Parses the output of [`grid_to_csv`] (a header row is optional).
pub fn grid_from_csv(text: &str) -> Result<GridCurve> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut pts = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(FdpError::Serialization(format!("row {} has {} columns, expected 2", i + 1, rec.len())));
        }
        let parsed = (rec[0].parse::<f64>(), rec[1].parse::<f64>());
        match parsed {
            (Ok(a), Ok(b)) => pts.push((a, b)),
            _ if i == 0 => continue,
            _ => return Err(FdpError::Serialization(format!("row {} is not numeric", i + 1))),
        }
    }
    GridCurve::from_points(&pts, false)
}
