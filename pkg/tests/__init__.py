"""Test suite for cogcap."""
