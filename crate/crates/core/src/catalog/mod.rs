//! Restaurant catalog: domain types, validation, and option lists.

mod geo;
pub mod ingest;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use geo::{GeoPoint, EARTH_RADIUS_M};

/// Number of options shown when a journey starts.
pub const DEFAULT_OPTION_COUNT: usize = 5;

/// One facet of a restaurant a user can open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum View {
    Overview,
    Menu,
    FoodPhotos,
    AmbiencePhotos,
    Reviews,
}

impl View {
    pub const ALL: [View; 5] = [
        View::Overview,
        View::Menu,
        View::FoodPhotos,
        View::AmbiencePhotos,
        View::Reviews,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            View::Overview => "overview",
            View::Menu => "menu",
            View::FoodPhotos => "food_photos",
            View::AmbiencePhotos => "ambience_photos",
            View::Reviews => "reviews",
        }
    }

    pub fn from_tag(tag: &str) -> Option<View> {
        View::ALL.into_iter().find(|v| v.tag() == tag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhotoKind {
    Food,
    Ambience,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotoRef {
    pub kind: PhotoKind,
    pub uri: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caption: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MenuItem {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub price: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReviewSource {
    Google,
    Yelp,
    Zomato,
    Synthetic,
}

impl ReviewSource {
    pub fn tag(self) -> &'static str {
        match self {
            ReviewSource::Google => "google",
            ReviewSource::Yelp => "yelp",
            ReviewSource::Zomato => "zomato",
            ReviewSource::Synthetic => "synthetic",
        }
    }
}

/// A customer review. Reviews are stored oldest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Review {
    pub id: String,
    pub restaurant_id: String,
    pub text: String,
    pub source: ReviewSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rating: Option<u8>,
}

/// Scenario-facing annotations in `[0, 1]`. Only the fixture catalog carries
/// them; exported source data never does.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Attributes {
    pub kid_friendly: f64,
    pub romantic: f64,
    pub vegetarian_coverage: f64,
    pub ambience_formality: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Restaurant {
    pub id: String,
    pub name: String,
    pub location: GeoPoint,
    pub distance_m: f64,
    pub price_tier: u8,
    #[serde(default)]
    pub cuisines: Vec<String>,
    #[serde(default)]
    pub menu: Vec<MenuItem>,
    #[serde(default)]
    pub photos: Vec<PhotoRef>,
    #[serde(default)]
    pub reviews: Vec<Review>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attributes: Option<Attributes>,
}

impl Restaurant {
    pub fn price_symbol(&self) -> &'static str {
        match self.price_tier {
            1 => "$",
            2 => "$$",
            3 => "$$$",
            _ => "$$$$",
        }
    }

    pub fn photos_of(&self, kind: PhotoKind) -> impl Iterator<Item = &PhotoRef> {
        self.photos.iter().filter(move |p| p.kind == kind)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("catalog has no restaurants")]
    Empty,
    #[error("duplicate restaurant id `{0}`")]
    DuplicateId(String),
    #[error("restaurant `{id}`: price tier {tier} outside 1..=4")]
    PriceTier { id: String, tier: u8 },
    #[error("restaurant `{id}`: distance {distance_m} m is negative or not finite")]
    Distance { id: String, distance_m: f64 },
    #[error("restaurant `{id}`: invalid coordinates")]
    Location { id: String },
    #[error("restaurant `{id}`: field `{field}` must not be empty")]
    EmptyField { id: String, field: &'static str },
    #[error("restaurant `{id}`: menu item price must be non-negative")]
    MenuPrice { id: String },
    #[error("review `{review}` references `{restaurant}`, which does not contain it")]
    DanglingReview { review: String, restaurant: String },
    #[error("duplicate review id `{0}`")]
    DuplicateReview(String),
    #[error("review `{review}`: rating {rating} outside 1..=5")]
    Rating { review: String, rating: u8 },
    #[error("catalog origin has invalid coordinates")]
    Origin,
}

/// Wire shape of a catalog document; converted through validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogDocument {
    pub origin: GeoPoint,
    pub currency: String,
    pub restaurants: Vec<Restaurant>,
}

/// A validated, immutable set of restaurants around one origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CatalogDocument", into = "CatalogDocument")]
pub struct Catalog {
    origin: GeoPoint,
    currency: String,
    restaurants: Vec<Restaurant>,
    by_id: BTreeMap<String, usize>,
}

impl TryFrom<CatalogDocument> for Catalog {
    type Error = CatalogError;

    fn try_from(doc: CatalogDocument) -> Result<Self, Self::Error> {
        Catalog::new(doc.origin, doc.currency, doc.restaurants)
    }
}

impl From<Catalog> for CatalogDocument {
    fn from(c: Catalog) -> Self {
        CatalogDocument {
            origin: c.origin,
            currency: c.currency,
            restaurants: c.restaurants,
        }
    }
}

impl Catalog {
    pub fn new(
        origin: GeoPoint,
        currency: impl Into<String>,
        restaurants: Vec<Restaurant>,
    ) -> Result<Self, CatalogError> {
        if !origin.is_valid() {
            return Err(CatalogError::Origin);
        }
        if restaurants.is_empty() {
            return Err(CatalogError::Empty);
        }
        let mut by_id = BTreeMap::new();
        let mut review_ids = BTreeSet::new();
        for (i, r) in restaurants.iter().enumerate() {
            validate_restaurant(r)?;
            if by_id.insert(r.id.clone(), i).is_some() {
                return Err(CatalogError::DuplicateId(r.id.clone()));
            }
            for review in &r.reviews {
                if !review_ids.insert(review.id.as_str()) {
                    return Err(CatalogError::DuplicateReview(review.id.clone()));
                }
            }
        }
        Ok(Self {
            origin,
            currency: currency.into(),
            restaurants,
            by_id,
        })
    }

    pub fn origin(&self) -> GeoPoint {
        self.origin
    }

    pub fn currency(&self) -> &str {
        &self.currency
    }

    pub fn restaurants(&self) -> &[Restaurant] {
        &self.restaurants
    }

    pub fn len(&self) -> usize {
        self.restaurants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.restaurants.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Restaurant> {
        self.by_id.get(id).map(|&i| &self.restaurants[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.by_id.contains_key(id)
    }

    /// Largest `distance_m` in the catalog.
    pub fn max_distance_m(&self) -> f64 {
        self.restaurants
            .iter()
            .map(|r| r.distance_m)
            .fold(0.0, f64::max)
    }

    /// Restaurants not in `exclude`, ordered by distance then id.
    fn eligible(&self, exclude: &BTreeSet<String>) -> Vec<&Restaurant> {
        let mut out: Vec<&Restaurant> = self
            .restaurants
            .iter()
            .filter(|r| !exclude.contains(&r.id))
            .collect();
        out.sort_by(|a, b| {
            a.distance_m
                .total_cmp(&b.distance_m)
                .then_with(|| a.id.cmp(&b.id))
        });
        out
    }

    /// Up to `k` closest restaurants outside `exclude`.
    ///
    /// The seed is accepted for signature parity with [`refresh_options`]
    /// and does not influence the result.
    ///
    /// [`refresh_options`]: Catalog::refresh_options
    pub fn nearby_options(
        &self,
        k: usize,
        _seed: u64,
        exclude: &BTreeSet<String>,
    ) -> Vec<&Restaurant> {
        let mut out = self.eligible(exclude);
        out.truncate(k);
        out
    }

    /// Up to `k` restaurants drawn uniformly without replacement from those
    /// outside `exclude`, using a ChaCha8 stream seeded with `seed`.
    pub fn refresh_options(
        &self,
        k: usize,
        seed: u64,
        exclude: &BTreeSet<String>,
    ) -> Vec<&Restaurant> {
        let pool = self.eligible(exclude);
        let take = k.min(pool.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::index::sample(&mut rng, pool.len(), take)
            .into_iter()
            .map(|i| pool[i])
            .collect()
    }
}

fn validate_restaurant(r: &Restaurant) -> Result<(), CatalogError> {
    let id = || r.id.clone();
    if r.id.trim().is_empty() {
        return Err(CatalogError::EmptyField {
            id: id(),
            field: "id",
        });
    }
    if r.name.trim().is_empty() {
        return Err(CatalogError::EmptyField {
            id: id(),
            field: "name",
        });
    }
    if !(1..=4).contains(&r.price_tier) {
        return Err(CatalogError::PriceTier {
            id: id(),
            tier: r.price_tier,
        });
    }
    if !(r.distance_m.is_finite() && r.distance_m >= 0.0) {
        return Err(CatalogError::Distance {
            id: id(),
            distance_m: r.distance_m,
        });
    }
    if !r.location.is_valid() {
        return Err(CatalogError::Location { id: id() });
    }
    for item in &r.menu {
        if item.name.trim().is_empty() {
            return Err(CatalogError::EmptyField {
                id: id(),
                field: "menu.name",
            });
        }
        if item.price.is_some_and(|p| !(p.is_finite() && p >= 0.0)) {
            return Err(CatalogError::MenuPrice { id: id() });
        }
    }
    if r.photos.iter().any(|p| p.uri.trim().is_empty()) {
        return Err(CatalogError::EmptyField {
            id: id(),
            field: "photos.uri",
        });
    }
    for review in &r.reviews {
        if review.restaurant_id != r.id {
            return Err(CatalogError::DanglingReview {
                review: review.id.clone(),
                restaurant: review.restaurant_id.clone(),
            });
        }
        if review.text.trim().is_empty() {
            return Err(CatalogError::EmptyField {
                id: id(),
                field: "reviews.text",
            });
        }
        if review.id.trim().is_empty() {
            return Err(CatalogError::EmptyField {
                id: id(),
                field: "reviews.id",
            });
        }
        if let Some(rating) = review.rating {
            if !(1..=5).contains(&rating) {
                return Err(CatalogError::Rating {
                    review: review.id.clone(),
                    rating,
                });
            }
        }
    }
    Ok(())
}


#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use alloc::vec;

    fn ids(rs: &[&Restaurant]) -> Vec<String> {
        rs.iter().map(|r| r.id.clone()).collect()
    }

    #[test]
    fn nearby_returns_five_closest() {
        let c = twelve();
        // sorted by hand: r07 61, r03 98, r01 120, r11 240, r05 300 (tie with r06, id first)
        let got = ids(&c.nearby_options(5, 0, &BTreeSet::new()));
        assert_eq!(got, ["r07", "r03", "r01", "r11", "r05"]);
    }

    #[test]
    fn nearby_fewer_than_k() {
        let rs = vec![restaurant("a", 3.0), restaurant("b", 1.0), restaurant("c", 2.0)];
        let c = Catalog::new(GeoPoint::new(0.0, 0.0), "USD", rs).unwrap();
        assert_eq!(ids(&c.nearby_options(5, 0, &BTreeSet::new())), ["b", "c", "a"]);
    }

    #[test]
    fn nearby_respects_exclusions() {
        let c = twelve();
        let exclude: BTreeSet<String> = ["r07".into(), "r01".into()].into_iter().collect();
        let got = ids(&c.nearby_options(3, 0, &exclude));
        assert_eq!(got, ["r03", "r11", "r05"]);
        let all: BTreeSet<String> = c.restaurants().iter().map(|r| r.id.clone()).collect();
        assert!(c.nearby_options(5, 0, &all).is_empty());
    }

    #[test]
    fn refresh_is_deterministic_per_seed() {
        let c = twelve();
        let none = BTreeSet::new();
        assert_eq!(
            ids(&c.refresh_options(5, 11, &none)),
            ids(&c.refresh_options(5, 11, &none))
        );
    }

    #[test]
    fn refresh_varies_across_seeds() {
        let c = twelve();
        let none = BTreeSet::new();
        let lists: Vec<Vec<String>> = (100..110)
            .map(|s| ids(&c.refresh_options(5, s, &none)))
            .collect();
        assert!(lists.iter().any(|l| *l != lists[0]));
        for l in &lists {
            let unique: BTreeSet<&String> = l.iter().collect();
            assert_eq!(unique.len(), 5);
        }
    }

    #[test]
    fn refresh_exhaustion_returns_remaining() {
        let c = twelve();
        let exclude: BTreeSet<String> = c
            .restaurants()
            .iter()
            .map(|r| r.id.clone())
            .filter(|id| id != "r02" && id != "r09")
            .collect();
        let mut got = ids(&c.refresh_options(5, 3, &exclude));
        got.sort();
        assert_eq!(got, ["r02", "r09"]);
    }

    #[test]
    fn rejects_invalid_entities() {
        let origin = GeoPoint::new(0.0, 0.0);
        assert_eq!(Catalog::new(origin, "USD", vec![]), Err(CatalogError::Empty));

        let mut bad_tier = restaurant("a", 1.0);
        bad_tier.price_tier = 5;
        assert!(matches!(
            Catalog::new(origin, "USD", vec![bad_tier]),
            Err(CatalogError::PriceTier { tier: 5, .. })
        ));

        let dup = vec![restaurant("a", 1.0), restaurant("a", 2.0)];
        assert_eq!(
            Catalog::new(origin, "USD", dup),
            Err(CatalogError::DuplicateId("a".into()))
        );

        let mut r = with_review(restaurant("a", 1.0), "Nice.");
        r.reviews[0].restaurant_id = "zzz".into();
        assert!(matches!(
            Catalog::new(origin, "USD", vec![r]),
            Err(CatalogError::DanglingReview { .. })
        ));

        let mut neg = restaurant("a", -1.0);
        neg.distance_m = -1.0;
        assert!(matches!(
            Catalog::new(origin, "USD", vec![neg]),
            Err(CatalogError::Distance { .. })
        ));

        let mut photo = restaurant("a", 1.0);
        photo.photos.push(PhotoRef {
            kind: PhotoKind::Food,
            uri: " ".into(),
            caption: None,
        });
        assert!(matches!(
            Catalog::new(origin, "USD", vec![photo]),
            Err(CatalogError::EmptyField { field: "photos.uri", .. })
        ));
    }
}
