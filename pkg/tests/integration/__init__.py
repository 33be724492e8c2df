"""
Integration tests running campaigns end to end
"""
