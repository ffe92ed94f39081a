"""
Test suite for Flood Evacuation System
Contains unit tests and integration tests for all components except Google Maps API
"""