//! Normalization of exported Google Places, Yelp and Zomato records.
//!
//! Each source layout is described in `docs/sources.md`. Required fields are
//! modelled as `Option` so a missing value can be reported with the record
//! index and field path instead of a generic decode failure.
//!
//! Records describing the same place are merged: two records match when
//! their normalized names are equal and they lie within
//! [`MERGE_RADIUS_M`] of each other. The merged restaurant keeps the id and
//! location of the first record seen, concatenates reviews and photos
//! (deduplicated by id and uri), unions cuisines, and takes its price tier
//! from the most specific source (Yelp, then Google, then Zomato).

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{Catalog, CatalogError, GeoPoint, MenuItem, PhotoKind, PhotoRef, Restaurant, Review, ReviewSource};

/// Two records closer than this (and with equal normalized names) are one place.
pub const MERGE_RADIUS_M: f64 = 50.0;

/// Upper bounds (inclusive) of Zomato `average_cost_for_two` for tiers 1..=3;
/// anything above the last bound is tier 4.
pub const ZOMATO_COST_BOUNDS: [f64; 3] = [30.0, 60.0, 120.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Google,
    Yelp,
    Zomato,
}

impl SourceKind {
    pub fn parse(tag: &str) -> Option<Self> {
        match tag {
            "google" => Some(SourceKind::Google),
            "yelp" => Some(SourceKind::Yelp),
            "zomato" => Some(SourceKind::Zomato),
            _ => None,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            SourceKind::Google => "google",
            SourceKind::Yelp => "yelp",
            SourceKind::Zomato => "zomato",
        }
    }

    fn review_source(self) -> ReviewSource {
        match self {
            SourceKind::Google => ReviewSource::Google,
            SourceKind::Yelp => ReviewSource::Yelp,
            SourceKind::Zomato => ReviewSource::Zomato,
        }
    }

    /// Higher wins when sources disagree on price.
    fn price_specificity(self) -> u8 {
        match self {
            SourceKind::Yelp => 3,
            SourceKind::Google => 2,
            SourceKind::Zomato => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourcePhoto {
    pub kind: Option<PhotoKind>,
    pub url: Option<String>,
    #[serde(default)]
    pub caption: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatLng {
    pub lat: Option<f64>,
    pub lng: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoogleGeometry {
    pub location: Option<LatLng>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoogleReview {
    #[serde(default)]
    pub author_name: Option<String>,
    #[serde(default)]
    pub time: Option<i64>,
    pub text: Option<String>,
    #[serde(default)]
    pub rating: Option<f64>,
}

/// Google Places "place details" export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoogleRecord {
    pub place_id: Option<String>,
    pub name: Option<String>,
    pub geometry: Option<GoogleGeometry>,
    /// 0 (free) ..= 4.
    pub price_level: Option<u8>,
    #[serde(default)]
    pub types: Vec<String>,
    #[serde(default)]
    pub photos: Vec<SourcePhoto>,
    #[serde(default)]
    pub reviews: Vec<GoogleReview>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YelpCoordinates {
    pub latitude: Option<f64>,
    pub longitude: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YelpCategory {
    #[serde(default)]
    pub alias: Option<String>,
    pub title: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YelpReview {
    pub id: Option<String>,
    pub text: Option<String>,
    #[serde(default)]
    pub rating: Option<f64>,
}

/// Yelp Fusion "business" export with inlined reviews.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YelpRecord {
    pub id: Option<String>,
    pub name: Option<String>,
    pub coordinates: Option<YelpCoordinates>,
    /// `"$"` ..= `"$$$$"`.
    pub price: Option<String>,
    #[serde(default)]
    pub categories: Vec<YelpCategory>,
    #[serde(default)]
    pub photos: Vec<SourcePhoto>,
    #[serde(default)]
    pub reviews: Vec<YelpReview>,
}

/// Zomato reports coordinates as strings; numbers are accepted too.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Number(f64),
    Text(String),
}

impl Coordinate {
    fn value(&self) -> Option<f64> {
        match self {
            Coordinate::Number(v) => Some(*v),
            Coordinate::Text(s) => s.trim().parse().ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZomatoLocation {
    pub latitude: Option<Coordinate>,
    pub longitude: Option<Coordinate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZomatoMenuItem {
    pub name: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub price: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZomatoReview {
    #[serde(default)]
    pub id: Option<String>,
    pub review_text: Option<String>,
    #[serde(default)]
    pub rating: Option<f64>,
}

/// Zomato "restaurant" export with menu and reviews.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZomatoRecord {
    pub res_id: Option<Coordinate>,
    pub name: Option<String>,
    pub location: Option<ZomatoLocation>,
    pub average_cost_for_two: Option<f64>,
    /// Comma separated, e.g. `"Italian, Pizza"`.
    #[serde(default)]
    pub cuisines: Option<String>,
    #[serde(default)]
    pub menu: Vec<ZomatoMenuItem>,
    #[serde(default)]
    pub photos: Vec<SourcePhoto>,
    #[serde(default)]
    pub reviews: Vec<ZomatoReview>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum SourceRecord {
    Google(GoogleRecord),
    Yelp(YelpRecord),
    Zomato(ZomatoRecord),
}

impl SourceRecord {
    pub fn kind(&self) -> SourceKind {
        match self {
            SourceRecord::Google(_) => SourceKind::Google,
            SourceRecord::Yelp(_) => SourceKind::Yelp,
            SourceRecord::Zomato(_) => SourceKind::Zomato,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{provider} record {index}: field `{field}`: {message}")]
pub struct IngestError {
    pub provider: &'static str,
    pub index: usize,
    pub field: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestWarning {
    pub restaurant_id: String,
    pub message: String,
}

/// Normalized restaurants awaiting an origin; distance is filled in by
/// [`Fragment::into_catalog`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Fragment {
    entries: Vec<Entry>,
    warnings: Vec<IngestWarning>,
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    restaurant: Restaurant,
    key: String,
    price_rank: u8,
}

/// Normalize one batch of source records into a fragment.
pub fn ingest(records: &[SourceRecord]) -> Result<Fragment, IngestError> {
    let mut fragment = Fragment::default();
    for (index, record) in records.iter().enumerate() {
        let (restaurant, rank) = normalize(index, record)?;
        fragment.absorb_one(restaurant, rank);
    }
    Ok(fragment)
}

impl Fragment {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn restaurants(&self) -> impl Iterator<Item = &Restaurant> {
        self.entries.iter().map(|e| &e.restaurant)
    }

    pub fn warnings(&self) -> &[IngestWarning] {
        &self.warnings
    }

    /// Merge another fragment into this one using the duplicate rule.
    pub fn absorb(&mut self, other: Fragment) {
        for e in other.entries {
            self.absorb_one(e.restaurant, e.price_rank);
        }
        for w in other.warnings {
            if !self.warnings.contains(&w) {
                self.warnings.push(w);
            }
        }
    }

    fn absorb_one(&mut self, incoming: Restaurant, rank: u8) {
        let key = normalize_name(&incoming.name);
        let target = self.entries.iter_mut().find(|e| {
            e.key == key && e.restaurant.location.distance_m(&incoming.location) <= MERGE_RADIUS_M
        });
        let Some(entry) = target else {
            self.entries.push(Entry {
                restaurant: incoming,
                key,
                price_rank: rank,
            });
            return;
        };

        let base = &mut entry.restaurant;
        if rank > entry.price_rank {
            base.price_tier = incoming.price_tier;
            entry.price_rank = rank;
        } else if rank == entry.price_rank && incoming.price_tier != base.price_tier {
            let kept = base.price_tier.min(incoming.price_tier);
            let warning = IngestWarning {
                restaurant_id: base.id.clone(),
                message: format!(
                    "conflicting price tiers {} and {}; keeping {}",
                    base.price_tier, incoming.price_tier, kept
                ),
            };
            base.price_tier = kept;
            if !self.warnings.contains(&warning) {
                self.warnings.push(warning);
            }
        }

        let mut seen: BTreeSet<String> = base.cuisines.iter().map(|c| c.to_lowercase()).collect();
        for c in incoming.cuisines {
            if seen.insert(c.to_lowercase()) {
                base.cuisines.push(c);
            }
        }
        if base.menu.is_empty() {
            base.menu = incoming.menu;
        }
        for p in incoming.photos {
            if !base.photos.iter().any(|q| q.uri == p.uri) {
                base.photos.push(p);
            }
        }
        for mut review in incoming.reviews {
            if !base.reviews.iter().any(|r| r.id == review.id) {
                review.restaurant_id = base.id.clone();
                base.reviews.push(review);
            }
        }
    }

    /// Compute distances from `origin` and validate the result.
    pub fn into_catalog(
        self,
        origin: GeoPoint,
        currency: impl Into<String>,
    ) -> Result<Catalog, CatalogError> {
        let restaurants = self
            .entries
            .into_iter()
            .map(|e| {
                let mut r = e.restaurant;
                r.distance_m = origin.distance_m(&r.location);
                r
            })
            .collect();
        Catalog::new(origin, currency, restaurants)
    }
}

/// Case-folded alphanumeric words joined by single spaces.
pub fn normalize_name(name: &str) -> String {
    let mut out = String::new();
    for word in name
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
    {
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(word.chars().flat_map(char::to_lowercase));
    }
    out
}

/// `"$"` → 1 … `"$$$$"` → 4.
pub fn price_from_symbols(symbols: &str) -> Option<u8> {
    let s = symbols.trim();
    if s.is_empty() || s.len() > 4 || !s.chars().all(|c| c == '$') {
        return None;
    }
    Some(s.len() as u8)
}

/// Google `price_level` 0..=4; "free" folds into the cheapest tier.
pub fn price_from_google_level(level: u8) -> Option<u8> {
    match level {
        0 => Some(1),
        1..=4 => Some(level),
        _ => None,
    }
}

/// Zomato cost-for-two bucketed by [`ZOMATO_COST_BOUNDS`].
pub fn price_from_zomato_cost(cost: f64) -> Option<u8> {
    if !(cost.is_finite() && cost >= 0.0) {
        return None;
    }
    let tier = ZOMATO_COST_BOUNDS.iter().take_while(|&&b| cost > b).count() as u8 + 1;
    Some(tier)
}

struct Ctx {
    source: &'static str,
    index: usize,
}

impl Ctx {
    fn err(&self, field: impl Into<String>, message: impl Into<String>) -> IngestError {
        IngestError {
            provider: self.source,
            index: self.index,
            field: field.into(),
            message: message.into(),
        }
    }

    fn required<'a, T>(&self, value: &'a Option<T>, field: &str) -> Result<&'a T, IngestError> {
        value.as_ref().ok_or_else(|| self.err(field, "missing"))
    }

    fn text(&self, value: &Option<String>, field: &str) -> Result<String, IngestError> {
        let s = self.required(value, field)?.trim();
        if s.is_empty() {
            return Err(self.err(field, "must not be empty"));
        }
        Ok(s.to_string())
    }

    fn location(&self, lat: Option<f64>, lon: Option<f64>, field: &str) -> Result<GeoPoint, IngestError> {
        let lat = lat.ok_or_else(|| self.err(format!("{field}.lat"), "missing or not a number"))?;
        let lon = lon.ok_or_else(|| self.err(format!("{field}.lon"), "missing or not a number"))?;
        let p = GeoPoint::new(lat, lon);
        if !p.is_valid() {
            return Err(self.err(field, "coordinates out of range"));
        }
        Ok(p)
    }

    fn rating(&self, value: Option<f64>, field: &str) -> Result<Option<u8>, IngestError> {
        match value {
            None => Ok(None),
            Some(v) if v.is_finite() && (1.0..=5.0).contains(&v) => Ok(Some(libm::round(v) as u8)),
            Some(_) => Err(self.err(field, "rating outside 1..=5")),
        }
    }

    fn photos(&self, photos: &[SourcePhoto]) -> Result<Vec<PhotoRef>, IngestError> {
        photos
            .iter()
            .enumerate()
            .map(|(i, p)| {
                Ok(PhotoRef {
                    kind: *self.required(&p.kind, &format!("photos[{i}].kind"))?,
                    uri: self.text(&p.url, &format!("photos[{i}].url"))?,
                    caption: p.caption.clone(),
                })
            })
            .collect()
    }
}

fn review(
    kind: SourceKind,
    source_id: &str,
    restaurant_id: &str,
    own_id: Option<String>,
    position: usize,
    text: String,
    rating: Option<u8>,
) -> Review {
    let suffix = own_id.unwrap_or_else(|| format!("{position}"));
    Review {
        id: format!("{}:{}:{}", kind.tag(), source_id, suffix),
        restaurant_id: restaurant_id.to_string(),
        text,
        source: kind.review_source(),
        rating,
    }
}

fn normalize(index: usize, record: &SourceRecord) -> Result<(Restaurant, u8), IngestError> {
    let kind = record.kind();
    let cx = Ctx {
        source: kind.tag(),
        index,
    };
    let restaurant = match record {
        SourceRecord::Google(g) => {
            let source_id = cx.text(&g.place_id, "place_id")?;
            let id = format!("google:{source_id}");
            let loc = cx
                .required(&g.geometry, "geometry")?
                .location
                .as_ref()
                .ok_or_else(|| cx.err("geometry.location", "missing"))?;
            let level = *cx.required(&g.price_level, "price_level")?;
            let price_tier = price_from_google_level(level)
                .ok_or_else(|| cx.err("price_level", "expected 0..=4"))?;
            let mut reviews = Vec::new();
            for (i, r) in g.reviews.iter().enumerate() {
                let text = cx.text(&r.text, &format!("reviews[{i}].text"))?;
                let rating = cx.rating(r.rating, &format!("reviews[{i}].rating"))?;
                let own = match (&r.author_name, r.time) {
                    (_, Some(t)) => Some(format!("{t}")),
                    (Some(a), None) => Some(normalize_name(a).replace(' ', "-")),
                    (None, None) => None,
                };
                reviews.push(review(kind, &source_id, &id, own, i, text, rating));
            }
            Restaurant {
                name: cx.text(&g.name, "name")?,
                location: cx.location(loc.lat, loc.lng, "geometry.location")?,
                distance_m: 0.0,
                price_tier,
                cuisines: g
                    .types
                    .iter()
                    .filter(|t| !matches!(t.as_str(), "restaurant" | "food" | "point_of_interest" | "establishment"))
                    .cloned()
                    .collect(),
                menu: Vec::new(),
                photos: cx.photos(&g.photos)?,
                reviews,
                attributes: None,
                id,
            }
        }
        SourceRecord::Yelp(y) => {
            let source_id = cx.text(&y.id, "id")?;
            let id = format!("yelp:{source_id}");
            let coords = cx.required(&y.coordinates, "coordinates")?;
            let symbols = cx.required(&y.price, "price")?;
            let price_tier = price_from_symbols(symbols)
                .ok_or_else(|| cx.err("price", "expected \"$\" to \"$$$$\""))?;
            let mut reviews = Vec::new();
            for (i, r) in y.reviews.iter().enumerate() {
                let text = cx.text(&r.text, &format!("reviews[{i}].text"))?;
                let rating = cx.rating(r.rating, &format!("reviews[{i}].rating"))?;
                reviews.push(review(kind, &source_id, &id, r.id.clone(), i, text, rating));
            }
            let mut cuisines = Vec::new();
            for (i, c) in y.categories.iter().enumerate() {
                cuisines.push(cx.text(&c.title, &format!("categories[{i}].title"))?);
            }
            Restaurant {
                name: cx.text(&y.name, "name")?,
                location: cx.location(coords.latitude, coords.longitude, "coordinates")?,
                distance_m: 0.0,
                price_tier,
                cuisines,
                menu: Vec::new(),
                photos: cx.photos(&y.photos)?,
                reviews,
                attributes: None,
                id,
            }
        }
        SourceRecord::Zomato(z) => {
            let source_id = match cx.required(&z.res_id, "res_id")? {
                Coordinate::Number(n) => format!("{}", *n as i64),
                Coordinate::Text(s) if !s.trim().is_empty() => s.trim().to_string(),
                Coordinate::Text(_) => return Err(cx.err("res_id", "must not be empty")),
            };
            let id = format!("zomato:{source_id}");
            let loc = cx.required(&z.location, "location")?;
            let lat = loc.latitude.as_ref().and_then(Coordinate::value);
            let lon = loc.longitude.as_ref().and_then(Coordinate::value);
            let cost = *cx.required(&z.average_cost_for_two, "average_cost_for_two")?;
            let price_tier = price_from_zomato_cost(cost)
                .ok_or_else(|| cx.err("average_cost_for_two", "must be a non-negative number"))?;
            let mut menu = Vec::new();
            for (i, m) in z.menu.iter().enumerate() {
                if m.price.is_some_and(|p| !(p.is_finite() && p >= 0.0)) {
                    return Err(cx.err(format!("menu[{i}].price"), "must be non-negative"));
                }
                menu.push(MenuItem {
                    name: cx.text(&m.name, &format!("menu[{i}].name"))?,
                    description: m.description.clone(),
                    price: m.price,
                });
            }
            let mut reviews = Vec::new();
            for (i, r) in z.reviews.iter().enumerate() {
                let text = cx.text(&r.review_text, &format!("reviews[{i}].review_text"))?;
                let rating = cx.rating(r.rating, &format!("reviews[{i}].rating"))?;
                reviews.push(review(kind, &source_id, &id, r.id.clone(), i, text, rating));
            }
            Restaurant {
                name: cx.text(&z.name, "name")?,
                location: cx.location(lat, lon, "location")?,
                distance_m: 0.0,
                price_tier,
                cuisines: z
                    .cuisines
                    .as_deref()
                    .unwrap_or("")
                    .split(',')
                    .map(str::trim)
                    .filter(|c| !c.is_empty())
                    .map(String::from)
                    .collect(),
                menu,
                photos: cx.photos(&z.photos)?,
                reviews,
                attributes: None,
                id,
            }
        }
    };
    Ok((restaurant, kind.price_specificity()))
}
