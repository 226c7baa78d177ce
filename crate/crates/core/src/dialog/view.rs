use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::catalog::{MenuItem, PhotoKind, PhotoRef, Restaurant, Review, View};

/// What an option card shows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptionSummary {
    pub id: String,
    pub name: String,
    pub price_tier: u8,
    pub price: String,
    pub cuisines: Vec<String>,
    pub distance_m: f64,
}

impl OptionSummary {
    pub fn of(r: &Restaurant) -> Self {
        Self {
            id: r.id.clone(),
            name: r.name.clone(),
            price_tier: r.price_tier,
            price: String::from(r.price_symbol()),
            cuisines: r.cuisines.clone(),
            distance_m: r.distance_m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "view")]
pub enum ViewPayload {
    Overview {
        #[serde(flatten)]
        summary: OptionSummary,
    },
    Menu {
        restaurant_id: String,
        items: Vec<MenuItem>,
    },
    FoodPhotos {
        restaurant_id: String,
        photos: Vec<PhotoRef>,
    },
    AmbiencePhotos {
        restaurant_id: String,
        photos: Vec<PhotoRef>,
    },
    /// Newest first.
    Reviews {
        restaurant_id: String,
        reviews: Vec<Review>,
    },
}

impl ViewPayload {
    pub fn project(r: &Restaurant, view: View) -> Self {
        let restaurant_id = r.id.clone();
        match view {
            View::Overview => ViewPayload::Overview {
                summary: OptionSummary::of(r),
            },
            View::Menu => ViewPayload::Menu {
                restaurant_id,
                items: r.menu.clone(),
            },
            View::FoodPhotos => ViewPayload::FoodPhotos {
                restaurant_id,
                photos: r.photos_of(PhotoKind::Food).cloned().collect(),
            },
            View::AmbiencePhotos => ViewPayload::AmbiencePhotos {
                restaurant_id,
                photos: r.photos_of(PhotoKind::Ambience).cloned().collect(),
            },
            View::Reviews => ViewPayload::Reviews {
                restaurant_id,
                reviews: r.reviews.iter().rev().cloned().collect(),
            },
        }
    }

    pub fn view(&self) -> View {
        match self {
            ViewPayload::Overview { .. } => View::Overview,
            ViewPayload::Menu { .. } => View::Menu,
            ViewPayload::FoodPhotos { .. } => View::FoodPhotos,
            ViewPayload::AmbiencePhotos { .. } => View::AmbiencePhotos,
            ViewPayload::Reviews { .. } => View::Reviews,
        }
    }
}
