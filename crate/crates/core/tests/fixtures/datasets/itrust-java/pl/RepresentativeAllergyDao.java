public class RepresentativeAllergyDao {
    public void cancelAllergy(Allergy allergy) {
        allergyStore.cancel(allergy);
    }
    public void addAllergy(Allergy allergy) {
        allergyStore.add(allergy);
    }
}
