//! Serialized outputs of the commands.

use serde::Serialize;
use skly_core::bridge::Bridge;
use skly_core::hesse::{monomial_name, ProjPoint, CUBIC_MONOMIALS};
use skly_core::paperchecks::{blowup_dim, g_terms, CheckReport, Setup};
use skly_core::Result;

use crate::config::Config;

#[derive(Serialize, Debug)]
pub struct Term {
    pub monomial: String,
    pub coeff: u64,
}

#[derive(Serialize, Debug)]
pub struct OrderCertificate {
    pub threshold: u64,
    pub order_exceeds_threshold: bool,
}

#[derive(Serialize, Debug)]
pub struct Geometry {
    pub cubic: Vec<Term>,
    pub lambda: u64,
    pub basepoint: ProjPoint,
    pub translation: ProjPoint,
    pub order_certificate: OrderCertificate,
    pub g: Vec<Term>,
}

impl Geometry {
    pub fn of(bridge: &Bridge, threshold: u64) -> Result<Self> {
        let curve = bridge.curve();
        let cubic = CUBIC_MONOMIALS
            .iter()
            .zip(curve.cubic().coeffs())
            .filter(|(_, &c)| c != 0)
            .map(|(&m, &coeff)| Term {
                monomial: monomial_name(m),
                coeff,
            })
            .collect();
        let g = g_terms(bridge)?
            .into_iter()
            .map(|(monomial, coeff)| Term { monomial, coeff })
            .collect();
        Ok(Geometry {
            cubic,
            lambda: curve.lambda(),
            basepoint: curve.basepoint(),
            translation: curve.translation(),
            order_certificate: OrderCertificate {
                threshold,
                order_exceeds_threshold: curve.order_of(&curve.translation(), threshold).is_none(),
            },
            g,
        })
    }
}

#[derive(Serialize, Debug)]
pub struct RunArtifact {
    pub command: &'static str,
    pub config: Config,
    pub abc: [u64; 3],
    pub attempts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Geometry>,
    pub reports: Vec<CheckReport>,
    pub pass: bool,
}

impl RunArtifact {
    pub fn new(
        command: &'static str,
        config: &Config,
        setup: &Setup,
        reports: Vec<CheckReport>,
    ) -> Result<Self> {
        let geometry = setup
            .bridge()
            .map(|b| Geometry::of(b, config.order_threshold))
            .transpose()?;
        let pass = reports.iter().all(|r| r.pass);
        Ok(RunArtifact {
            command,
            config: config.clone(),
            abc: setup.params(),
            attempts: setup.log().to_vec(),
            geometry,
            reports,
            pass,
        })
    }
}

#[derive(Serialize, Debug)]
pub struct HilbertRow {
    pub n: usize,
    pub dim: usize,
    pub predicted_dim: usize,
    pub mod_g: usize,
    pub predicted_mod_g: usize,
    pub g_part: usize,
    pub predicted_g_part: usize,
    pub matches: bool,
}

impl HilbertRow {
    pub fn new(e: usize, n: usize, dim: usize, mod_g: usize) -> Self {
        let predicted_dim = blowup_dim(e, n);
        let predicted_mod_g = (9 - e) * n;
        let predicted_g_part = blowup_dim(e, n - 1);
        HilbertRow {
            n,
            dim,
            predicted_dim,
            mod_g,
            predicted_mod_g,
            g_part: dim - mod_g,
            predicted_g_part,
            matches: dim == predicted_dim
                && mod_g == predicted_mod_g
                && dim - mod_g == predicted_g_part,
        }
    }
}

#[derive(Serialize, Debug)]
pub struct HilbertArtifact {
    pub command: &'static str,
    pub config: Config,
    pub abc: [u64; 3],
    pub divisor: Vec<ProjPoint>,
    pub e: usize,
    pub rows: Vec<HilbertRow>,
    pub pass: bool,
}
