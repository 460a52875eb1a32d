"""Community information system for a barangay: resident registry, blotter
and clearance casework, health records, geo hotspot mapping, crime
likelihood analytics, SMS broadcast, and privacy-filtered open data."""

__version__ = "0.1.0"
