use super::layout::{layout, SegKind, Segment};
use super::point::{Chain, Point};
use super::term::OrderTerm;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderProps {
    pub dense: bool,
    pub discrete: bool,
    pub has_min: bool,
    pub has_max: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointProps {
    pub has_successor: bool,
    pub has_predecessor: bool,
}

/// One representative per segment; fibre families contribute their inner
/// representatives.
pub(crate) fn sample_points(segs: &[Segment]) -> Vec<Point> {
    let mut out = Vec::new();
    for s in segs {
        if s.kind == SegKind::Fibres {
            out.extend(s.inner.iter().map(|x| x.rep.clone()));
        } else {
            out.push(s.rep.clone());
        }
    }
    out
}

/// Dense: no point has a successor. Discrete: every point below another
/// has a successor and every point above another has a predecessor.
pub fn order_props(t: &OrderTerm) -> OrderProps {
    let chain = Chain::new(t);
    let min = chain.min();
    let max = chain.max();
    let samples = sample_points(&layout(&chain, &[]));
    let dense = samples.iter().all(|p| chain.succ(p).is_none());
    let discrete = samples.iter().all(|p| {
        (max.as_ref() == Some(p) || chain.succ(p).is_some())
            && (min.as_ref() == Some(p) || chain.pred(p).is_some())
    });
    OrderProps { dense, discrete, has_min: min.is_some(), has_max: max.is_some() }
}

pub fn point_props(t: &OrderTerm, p: &Point) -> Result<PointProps> {
    let chain = Chain::new(t);
    chain.validate(p)?;
    Ok(PointProps {
        has_successor: chain.succ(p).is_some(),
        has_predecessor: chain.pred(p).is_some(),
    })
}
