namespace eulershell {}
