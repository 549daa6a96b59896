public class InsuranceRepresentativeDao {
    public void exportInsurance(Insurance insurance) {
        insuranceStore.export(insurance);
    }
    public void addRepresentative(Representative representative) {
        representativeStore.add(representative);
    }
}
