//! Legendre submanifolds generated by a potential, extended constitutive
//! surfaces obtained from them by a Reeb shift, and the connection that an
//! entropy form defines on the Gibbs line bundle.
//!
//! Sign convention: the extended surface is `s = U(q) + sigma(q)`,
//! `p_i = dU/dq^i`, so that the contact form pulls back to `d sigma` and
//! `delta s = delta U + delta sigma` along any process.

use crate::error::{Error, Result};
use crate::expr::{BinOp, Binding, Expr, ScalarField};
use crate::geometry::{reeb_flow, ContactChart, PhasePoint, SkewMatrix};

fn base_values(chart: &ContactChart, q: &Binding) -> Result<Vec<f64>> {
    Ok(q.select(chart.extensive())?)
}

/// Graph of the 1-jet of a potential `U(q)`.
#[derive(Debug, Clone)]
pub struct LegendreSurface {
    chart: ContactChart,
    potential: ScalarField,
}

impl LegendreSurface {
    pub fn new(chart: ContactChart, potential: &ScalarField) -> Result<Self> {
        let potential = potential.rebind(chart.extensive())?;
        Ok(LegendreSurface { chart, potential })
    }

    pub fn chart(&self) -> &ContactChart {
        &self.chart
    }

    pub fn potential(&self) -> &ScalarField {
        &self.potential
    }

    /// `(s = U(q); q; p = grad U(q))` with `q` in extensive-coordinate order.
    pub fn embed_at(&self, q: &[f64]) -> Result<PhasePoint> {
        let d = self.potential.gradient(q)?;
        PhasePoint::new(d.v, q.to_vec(), d.g)
    }
}

pub fn legendre_embed(surface: &LegendreSurface, q: &Binding) -> Result<PhasePoint> {
    surface.embed_at(&base_values(&surface.chart, q)?)
}

/// Legendre surface of `U` shifted along the Reeb field by `sigma`.
#[derive(Debug, Clone)]
pub struct ConstitutiveSurface {
    legendre: LegendreSurface,
    sigma: ScalarField,
    entropy: ScalarField,
}

impl ConstitutiveSurface {
    pub fn new(chart: ContactChart, potential: &ScalarField, sigma: &ScalarField) -> Result<Self> {
        let legendre = LegendreSurface::new(chart, potential)?;
        let sigma = sigma.rebind(legendre.chart.extensive())?;
        let total =
            Expr::Binary(BinOp::Add, Box::new(legendre.potential.expr().clone()), Box::new(sigma.expr().clone()));
        let entropy = ScalarField::new(total, legendre.chart.extensive())?;
        Ok(ConstitutiveSurface { legendre, sigma, entropy })
    }

    pub fn chart(&self) -> &ContactChart {
        self.legendre.chart()
    }

    pub fn potential(&self) -> &ScalarField {
        self.legendre.potential()
    }

    pub fn sigma(&self) -> &ScalarField {
        &self.sigma
    }

    /// Entropy `S = U + sigma` as a single field.
    pub fn entropy(&self) -> &ScalarField {
        &self.entropy
    }

    pub fn legendre(&self) -> &LegendreSurface {
        &self.legendre
    }

    pub fn embed_at(&self, q: &[f64]) -> Result<PhasePoint> {
        let base = self.legendre.embed_at(q)?;
        let shift = self.sigma.value(q)?;
        Ok(reeb_flow(&base, shift))
    }

    /// Components of `j^* theta` in the `dq^i` basis: `dS/dq^i - p_i`, with
    /// the embedding's `s`-slope differentiated through `S = U + sigma`.
    pub fn pullback_at(&self, q: &[f64]) -> Result<Vec<f64>> {
        let ds = self.entropy.gradient(q)?;
        let p = self.legendre.embed_at(q)?.p;
        Ok(ds.g.iter().zip(&p).map(|(a, b)| a - b).collect())
    }

    /// Point on the unshifted Legendre surface over `q` (the `-sigma` Reeb
    /// shift of the lift).
    pub fn companion_at(&self, q: &[f64]) -> Result<PhasePoint> {
        self.legendre.embed_at(q)
    }
}

pub fn surface_embed(surface: &ConstitutiveSurface, q: &Binding) -> Result<PhasePoint> {
    surface.embed_at(&base_values(surface.chart(), q)?)
}

pub fn pullback_contact(surface: &ConstitutiveSurface, q: &Binding) -> Result<Vec<f64>> {
    surface.pullback_at(&base_values(surface.chart(), q)?)
}

/// Reversible process associated with a path on the extended surface.
pub fn reversible_companion(surface: &ConstitutiveSurface, path: &[Binding]) -> Result<Vec<PhasePoint>> {
    path.iter().map(|q| surface.companion_at(&base_values(surface.chart(), q)?)).collect()
}

/// Connection `ds - p_i(s, q) dq^i` on the Gibbs bundle over the `q` space.
#[derive(Debug, Clone)]
pub struct GibbsConnection {
    coords: Vec<String>,
    p: Vec<ScalarField>,
}

impl GibbsConnection {
    /// `p` fields may depend on the fiber coordinate `s_name` and on `base`.
    pub fn new(s_name: &str, base: &[String], p: Vec<ScalarField>) -> Result<Self> {
        if p.len() != base.len() {
            return Err(Error::Dimension { expected: base.len(), found: p.len() });
        }
        let coords: Vec<String> = std::iter::once(s_name.to_string()).chain(base.iter().cloned()).collect();
        let p = p.into_iter().map(|f| f.rebind(&coords)).collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(GibbsConnection { coords, p })
    }

    /// Flat connection of an entropy form `dU`, `U = U(q)`.
    pub fn from_potential(s_name: &str, base: &[String], potential: &ScalarField) -> Result<Self> {
        let u = potential.rebind(base)?;
        let p = base.iter().map(|q| u.partial(q)).collect::<std::result::Result<Vec<_>, _>>()?;
        GibbsConnection::new(s_name, base, p)
    }

    /// `(s, q..)` coordinate names.
    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn base(&self) -> &[String] {
        &self.coords[1..]
    }

    pub fn coefficients(&self) -> &[ScalarField] {
        &self.p
    }

    /// Basis `d/dq^i + p_i d/ds` of the horizontal space at `x` (components
    /// in `(s, q..)` order).
    pub fn horizontal_basis(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        let m = self.p.len();
        (0..m)
            .map(|i| {
                let mut v = vec![0.0; m + 1];
                v[0] = self.p[i].value(x)?;
                v[1 + i] = 1.0;
                Ok(v)
            })
            .collect()
    }

    /// `Omega_ij = (p_{j,s} p_i - p_{i,s} p_j) + (p_{j,q^i} - p_{i,q^j})`.
    pub fn curvature_at(&self, x: &[f64]) -> Result<SkewMatrix> {
        let m = self.p.len();
        let d: Vec<_> = self.p.iter().map(|f| f.gradient(x)).collect::<std::result::Result<_, _>>()?;
        let mut rows = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in i + 1..m {
                let vertical = d[j].g[0] * d[i].v - d[i].g[0] * d[j].v;
                let curl = d[j].g[1 + i] - d[i].g[1 + j];
                let w = vertical + curl;
                rows[i][j] = w;
                rows[j][i] = -w;
            }
        }
        Ok(SkewMatrix { labels: self.base().to_vec(), rows })
    }
}

pub fn connection_curvature(c: &GibbsConnection, x: &Binding) -> Result<SkewMatrix> {
    c.curvature_at(&x.select(c.coords())?)
}
