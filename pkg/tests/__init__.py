"""
Test suite for the Borel cocycle toolkit
"""
