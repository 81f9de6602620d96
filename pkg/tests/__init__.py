"""
Grundy Toolkitのテストパッケージ
"""
