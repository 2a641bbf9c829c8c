# exercise: arithmetic
# pattern: fallback
a = 10
b = 0
b = b + 4
print(a +)
print(a - b)
print(a * b)
print(a / b)
print(a // b)
print(a % b)
average = (a + b) / 2
print(average)
