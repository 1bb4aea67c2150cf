"""Legendrian graph front diagrams, CE DGAs, augmentation and sheaf
categories over prime fields."""

__version__ = "0.1.0"
