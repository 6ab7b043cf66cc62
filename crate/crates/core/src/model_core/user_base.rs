/// Closed interval `[lo, hi]` of the extremeness index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
}

impl Segment {
    pub fn new(lo: f64, hi: f64) -> Self {
        Segment { lo, hi }
    }

    pub fn len(&self) -> f64 {
        (self.hi - self.lo).max(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0.0
    }

    fn clip(&self, lo: f64, hi: f64) -> Option<Segment> {
        let s = Segment::new(self.lo.max(lo), self.hi.min(hi));
        (s.hi > s.lo).then_some(s)
    }
}

/// Participating users: sorted, disjoint intervals inside `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct UserBase {
    segments: Vec<Segment>,
}

/// Gap below which adjacent intervals are merged.
const MERGE_GAP: f64 = 1e-12;

impl UserBase {
    pub fn empty() -> Self {
        UserBase::default()
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        UserBase::from_segments([Segment::new(lo, hi)])
    }

    /// Clips to `[0, 1]`, drops empty pieces, sorts and merges touching
    /// intervals.
    pub fn from_segments<I: IntoIterator<Item = Segment>>(segments: I) -> Self {
        let mut v: Vec<Segment> = segments
            .into_iter()
            .filter_map(|s| s.clip(0.0, 1.0))
            .collect();
        v.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut out: Vec<Segment> = Vec::with_capacity(v.len());
        for s in v {
            match out.last_mut() {
                Some(last) if s.lo <= last.hi + MERGE_GAP => last.hi = last.hi.max(s.hi),
                _ => out.push(s),
            }
        }
        UserBase { segments: out }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn measure(&self) -> f64 {
        self.segments.iter().map(Segment::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Measure of the part of the base inside `[lo, hi]`.
    pub fn measure_within(&self, lo: f64, hi: f64) -> f64 {
        self.segments
            .iter()
            .filter_map(|s| s.clip(lo, hi))
            .map(|s| s.len())
            .sum()
    }

    /// Pieces of the base inside `[lo, hi]`.
    pub(crate) fn pieces_within(&self, lo: f64, hi: f64) -> impl Iterator<Item = Segment> + '_ {
        self.segments.iter().filter_map(move |s| s.clip(lo, hi))
    }
}
