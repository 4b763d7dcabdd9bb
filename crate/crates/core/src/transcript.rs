use alloc::vec::Vec;

/// Queries, responses and the final estimate of one 1-D run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Transcript {
    pub queries: Vec<f64>,
    pub responses: Vec<bool>,
    pub estimate: Option<f64>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, query: f64, response: bool) {
        debug_assert!(self.estimate.is_none(), "query after the estimate was set");
        self.queries.push(query);
        self.responses.push(response);
    }

    pub fn set_estimate(&mut self, x: f64) {
        debug_assert!(self.estimate.is_none(), "estimate set twice");
        self.estimate = Some(x);
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    /// What an eavesdropper sees.
    pub fn query_view(&self) -> &[f64] {
        &self.queries
    }
}

/// A `d`-dimensional run: one transcript per coordinate, submitted in
/// coordinate order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DimTranscript {
    pub coords: Vec<Transcript>,
}

impl DimTranscript {
    pub fn len(&self) -> usize {
        self.coords.iter().map(Transcript::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Queries tagged with their coordinate index, in submission order.
    pub fn tagged_queries(&self) -> Vec<(u32, f64)> {
        self.coords
            .iter()
            .enumerate()
            .flat_map(|(i, t)| t.queries.iter().map(move |&q| (i as u32, q)))
            .collect()
    }

    pub fn estimate(&self) -> Option<Vec<f64>> {
        self.coords.iter().map(|t| t.estimate).collect()
    }
}
