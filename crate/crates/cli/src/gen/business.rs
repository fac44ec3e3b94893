//! Business data generator: master data (customers, vendors, employees,
//! products) surrounded by transactional case chains
//! quotation -> order -> invoice, with a purchase/delivery side chain.
//! Every invoice carries a positive revenue figure.

use epgm_model::{props, EpgmDatabase};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::DatasetMeta;

pub const CASES_PER_SCALE: u32 = 120;

pub fn generate(scale: u32, seed: u64) -> (EpgmDatabase, DatasetMeta) {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut db = EpgmDatabase::new();

    let customers: Vec<u64> = (0..30 * scale as u64)
        .map(|i| db.add_vertex("Customer", props! { "name" => format!("Customer {i}") }))
        .collect();
    let vendors: Vec<u64> = (0..10 * scale as u64)
        .map(|i| db.add_vertex("Vendor", props! { "name" => format!("Vendor {i}") }))
        .collect();
    let employees: Vec<u64> = (0..20 * scale as u64)
        .map(|i| db.add_vertex("Employee", props! { "name" => format!("Employee {i}") }))
        .collect();
    let products: Vec<u64> = (0..40 * scale as u64)
        .map(|i| {
            db.add_vertex(
                "Product",
                props! { "name" => format!("Product {i}"),
                "price" => (rng.random_range(100..10_000) as f64) / 100.0 },
            )
        })
        .collect();

    let cases = CASES_PER_SCALE * scale;
    let mut invoiced = 0u32;
    for case in 0..cases {
        let customer = customers[rng.random_range(0..customers.len())];
        let employee = employees[rng.random_range(0..employees.len())];

        let quotation = db.add_vertex("SalesQuotation", props! { "num" => format!("Q{case:06}") });
        db.add_edge(quotation, customer, "sentTo", props! {})
            .unwrap();
        db.add_edge(quotation, employee, "sentBy", props! {})
            .unwrap();
        for _ in 0..rng.random_range(1..=3) {
            let product = products[rng.random_range(0..products.len())];
            db.add_edge(quotation, product, "contains", props! {})
                .unwrap();
        }

        // Not every quotation is confirmed, and not every order invoiced.
        if !rng.random_bool(0.92) {
            continue;
        }
        let order = db.add_vertex("SalesOrder", props! { "num" => format!("O{case:06}") });
        db.add_edge(order, quotation, "basedOn", props! {}).unwrap();
        db.add_edge(order, employee, "processedBy", props! {})
            .unwrap();

        if rng.random_bool(0.7) {
            let vendor = vendors[rng.random_range(0..vendors.len())];
            let purch = db.add_vertex("PurchOrder", props! { "num" => format!("P{case:06}") });
            db.add_edge(purch, order, "serves", props! {}).unwrap();
            db.add_edge(purch, vendor, "placedAt", props! {}).unwrap();
            let delivery = db.add_vertex("DeliveryNote", props! { "num" => format!("D{case:06}") });
            db.add_edge(delivery, purch, "confirms", props! {}).unwrap();
        }

        if rng.random_bool(0.95) {
            let revenue = (rng.random_range(10_000..5_000_000) as f64) / 100.0;
            let invoice = db.add_vertex(
                "SalesInvoice",
                props! { "num" => format!("I{case:06}"), "revenue" => revenue },
            );
            db.add_edge(invoice, order, "createdFor", props! {})
                .unwrap();
            db.add_edge(invoice, customer, "sentTo", props! {}).unwrap();
            invoiced += 1;
        }
    }

    let meta = DatasetMeta {
        kind: "business".to_string(),
        scale,
        seed,
        planted_communities: Default::default(),
        cases: Some(cases),
        invoiced_cases: Some(invoiced),
    };
    (db, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use epgm_model::PropertyValue;

    #[test]
    fn every_invoice_has_positive_revenue() {
        let (db, meta) = generate(1, 11);
        let mut invoices = 0;
        for v in db.vertices() {
            if v.label == "SalesInvoice" {
                invoices += 1;
                match v.properties.get("revenue") {
                    Some(PropertyValue::Float(r)) => assert!(*r > 0.0),
                    other => panic!("invoice without numeric revenue: {other:?}"),
                }
            }
        }
        assert_eq!(Some(invoices), meta.invoiced_cases);
        assert!(invoices > 90, "expected roughly a hundred invoiced cases");
    }

    #[test]
    fn determinism_and_case_counts() {
        let (a, meta_a) = generate(1, 3);
        let (b, meta_b) = generate(1, 3);
        assert_eq!(meta_a.invoiced_cases, meta_b.invoiced_cases);
        assert_eq!(a.vertex_count(), b.vertex_count());
        assert_eq!(a.edge_count(), b.edge_count());
        assert_eq!(meta_a.cases, Some(120));
    }
}
