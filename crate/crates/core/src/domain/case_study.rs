use super::{Issue, IssueKind, NegotiationDomain};

/// Index of the price issue in [`build_case_study_domain`].
pub const PRICE: usize = 0;
/// Index of the cancellation fee issue in [`build_case_study_domain`].
pub const CANCELLATION_FEE: usize = 1;

/// The hotel booking domain: a group of four travellers negotiating an
/// accommodation deal with a hotel.
///
/// Price (per night, 200 to 400) and cancellation fee (0 to 50 percent) are
/// predictable; the remaining five discrete issues are unpredictable and span
/// 6 * 4 * 5 * 5 * 7 = 4200 partial offers.
pub fn build_case_study_domain() -> NegotiationDomain {
    use IssueKind::{Predictable, Unpredictable};
    NegotiationDomain::new(vec![
        Issue::real(PRICE, "price", Predictable, 200.0, 400.0),
        Issue::real(CANCELLATION_FEE, "cancellation fee", Predictable, 0.0, 50.0),
        Issue::discrete(
            2,
            "arranged foods",
            Unpredictable,
            &[
                "none",
                "breakfast",
                "breakfast+lunch",
                "breakfast+dinner",
                "lunch+dinner",
                "all",
            ],
        ),
        Issue::discrete(
            3,
            "type of room",
            Unpredictable,
            &[
                "4 individual rooms",
                "2 twin rooms",
                "1 triple and 1 individual room",
                "1 apartment",
            ],
        ),
        Issue::discrete(
            4,
            "payment method",
            Unpredictable,
            &[
                "cash",
                "credit card",
                "bank transfer",
                "3 months deferred",
                "6 months deferred",
            ],
        ),
        Issue::discrete(
            5,
            "room orientation",
            Unpredictable,
            &["inner garden", "main street", "pool", "sea", "outer garden"],
        ),
        Issue::discrete(
            6,
            "free amenity",
            Unpredictable,
            &[
                "gym",
                "free wi-fi",
                "1 free drink per day",
                "1 free spa session",
                "pool service",
                "cable tv service",
                "free guided tour",
            ],
        ),
    ])
    .expect("case study domain is well formed")
}
