"""Topology-preserving morphs of kite-planar 1-planar straight-line drawings."""
