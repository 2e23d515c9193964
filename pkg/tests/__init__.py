"""Unit tests for euler-entropy."""
