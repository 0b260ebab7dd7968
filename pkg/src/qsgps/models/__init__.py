"""
Model classes for states, circuits, codes, Bell tests, hardware, attacks,
positioning and protocol reports.

Every model serializes through to_dict().
"""
