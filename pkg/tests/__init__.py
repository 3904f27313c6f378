"""Test suite for ergolab."""
